#include <gtest/gtest.h>

#include "generators.hpp"
#include "test_util.hpp"
#include "xwacoda/error.hpp"
#include "xwacoda/etl.hpp"

using namespace xwacoda;
using namespace xwacoda::etl;

namespace {

AttributeNode attr(std::string name) { return {std::move(name), etl::NodeKind::Attribute, std::nullopt, {}}; }
AttributeNode entity(std::string name, std::vector<AttributeNode> kids) {
  return {std::move(name), etl::NodeKind::Entity, std::nullopt, std::move(kids)};
}
AttributeTree tree(std::string root, std::vector<AttributeNode> kids) {
  AttributeTree t;
  t.root = {std::move(root), etl::NodeKind::Root, std::nullopt, std::move(kids)};
  return t;
}

const WarehouseModel& mini_model() {
  static const auto m = parse_model(read_file(testkit::mini_dir() / "dw-model.xml"));
  return m;
}

const MappingConfig& mini_mapping() {
  static const auto m = parse_mapping(read_file(testkit::mini_dir() / "mapping.json"));
  return m;
}

SourceRecordSet mini_records() { return read_delimited(read_file(testkit::mini_dir() / "regions.csv")); }

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::IoError;
}

WarehouseStore store_from(const std::map<std::string, std::string>& docs, const WarehouseModel& model) {
  return WarehouseStore::build(parse_warehouse_documents(model, docs));
}

}  // namespace

TEST(AttributeTree, ElementsAndAttributes) {
  const auto t = build_attribute_tree(R"(<case><patient age=""/><region length=""/></case>)");
  EXPECT_EQ(t, tree("case", {entity("patient", {attr("age")}), entity("region", {attr("length")})}));
}

TEST(AttributeTree, EmptyRoot) {
  const auto t = build_attribute_tree("<case/>");
  EXPECT_EQ(t.root.name, "case");
  EXPECT_EQ(t.root.kind, etl::NodeKind::Root);
  EXPECT_TRUE(t.root.children.empty());
}

TEST(AttributeTree, CaseOutlineLeavesAndFolding) {
  const auto t = build_attribute_tree(
      "<case><patient><Patient_age>58</Patient_age></patient>"
      "<abnormality><Number_of_regions>3</Number_of_regions></abnormality>"
      "<abnormality><Number_of_regions>1</Number_of_regions><assessment/></abnormality></case>");
  EXPECT_EQ(t, tree("case", {entity("patient", {attr("Patient_age")}),
                             entity("abnormality", {attr("Number_of_regions"), attr("assessment")})}));
}

TEST(AttributeTree, MalformedInput) {
  EXPECT_EQ(error_of([] { build_attribute_tree("<case><patient></case>"); }), ErrorCode::MalformedXml);
}

TEST(NormalizeName, CaseAndSeparators) {
  EXPECT_EQ(normalize_name("Patient-Age"), "patient_age");
  EXPECT_EQ(normalize_name("Number of regions"), "number_of_regions");
}

TEST(MergeTrees, PrunesSourceOnlyNodes) {
  const auto goal = tree("case", {attr("Patient_age"), attr("Number_of_regions")});
  const auto source = tree("doc", {entity("patient", {attr("patient-age"), attr("hospital")}),
                                   attr("number of regions")});
  const auto merged = merge_attribute_trees(goal, std::vector{source});
  EXPECT_EQ(merged.tree, goal);
  EXPECT_TRUE(merged.uncovered.empty());
}

TEST(MergeTrees, GraftsEntitySubtree) {
  const auto goal = tree("case", {attr("patient")});
  const auto source = tree("doc", {entity("Patient", {attr("Patient_age")})});
  const auto merged = merge_attribute_trees(goal, std::vector{source});
  EXPECT_EQ(merged.tree, tree("case", {entity("patient", {attr("Patient_age")})}));
}

TEST(MergeTrees, IdenticalTreesAreAFixpoint) {
  const auto goal = tree("case", {entity("patient", {attr("age")}), attr("length")});
  EXPECT_EQ(merge_attribute_trees(goal, std::vector{goal}).tree, goal);
}

TEST(MergeTrees, FirstSourceWinsAndGapsAreReported) {
  const auto goal = tree("case", {attr("patient"), attr("scanner")});
  const auto a = tree("a", {entity("patient", {attr("age")})});
  const auto b = tree("b", {entity("patient", {attr("birth")})});
  const auto merged = merge_attribute_trees(goal, std::vector{a, b});
  EXPECT_EQ(merged.tree, tree("case", {entity("patient", {attr("age")}), attr("scanner")}));
  EXPECT_EQ(merged.uncovered, (std::vector<std::string>{"case/scanner"}));
}

TEST(MergeTrees, Idempotent) {
  const auto goal = tree("case", {attr("patient"), attr("length")});
  const std::vector<AttributeTree> sources{tree("a", {entity("patient", {attr("age"), attr("sex")}), attr("LENGTH")})};
  const auto once = merge_attribute_trees(goal, sources).tree;
  EXPECT_EQ(merge_attribute_trees(goal, std::vector{once}).tree, once);
}

TEST(Records, DelimitedQuotingAndRaggedRows) {
  const auto r = read_delimited("a,b\n\"x,1\",\"say \"\"hi\"\"\"\n\"multi\nline\",2\n");
  EXPECT_EQ(r.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0], (std::vector<std::string>{"x,1", "say \"hi\""}));
  EXPECT_EQ(r.rows[1], (std::vector<std::string>{"multi\nline", "2"}));
  EXPECT_EQ(read_delimited("a\tb\n1\t2\n", '\t').rows[0], (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(error_of([] { read_delimited("a,b\n1\n"); }), ErrorCode::MappingError);
  EXPECT_TRUE(read_delimited("").header.empty());
}

TEST(Records, XmlRecords) {
  const auto r = read_xml_records(
      "<cases><case id=\"c1\"><patient age=\"58\"/><length>10.5</length></case>"
      "<case id=\"c2\"><scanner>howtek</scanner></case></cases>");
  EXPECT_EQ(r.header, (std::vector<std::string>{"id", "age", "length", "scanner"}));
  EXPECT_EQ(r.rows[0], (std::vector<std::string>{"c1", "58", "10.5", ""}));
  EXPECT_EQ(r.rows[1], (std::vector<std::string>{"c2", "", "", "howtek"}));
}

TEST(Records, ConcatUnionsHeaders) {
  const std::vector<SourceRecordSet> sets{read_delimited("a,b\n1,2\n"), read_delimited("b,c\n3,4\n")};
  const auto r = concat(sets);
  EXPECT_EQ(r.header, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(r.rows[0], (std::vector<std::string>{"1", "2", ""}));
  EXPECT_EQ(r.rows[1], (std::vector<std::string>{"", "3", "4"}));
}

TEST(Mapping, RoundTrips) {
  auto m = mini_mapping();
  m.dimensions[0].levels[1].attributes[0].buckets = {{50, 59, "50-59"}, {60, 69, "60-69"}};
  m.dimensions[0].levels[1].attributes[0].field = "age";
  EXPECT_EQ(parse_mapping(serialize_mapping(m)), m);
}

TEST(Mapping, MalformedJson) {
  EXPECT_EQ(error_of([] { parse_mapping("{"); }), ErrorCode::MappingError);
  EXPECT_EQ(error_of([] { parse_mapping(R"({"measures": {}})"); }), ErrorCode::MappingError);
}

TEST(Mapping, ValidationNamesUnknownFieldsAndTargets) {
  const auto header = mini_records().header;
  EXPECT_NO_THROW(validate_mapping(mini_mapping(), header, mini_model()));
  auto m = mini_mapping();
  m.measures[0].field = "nope";
  EXPECT_EQ(error_of([&] { validate_mapping(m, header, mini_model()); }), ErrorCode::MappingError);
  EXPECT_NO_THROW(validate_mapping(m, {}, mini_model()));
  m = mini_mapping();
  m.measures[0].measure = "Bogus";
  EXPECT_EQ(error_of([&] { validate_mapping(m, header, mini_model()); }), ErrorCode::MappingError);
  m = mini_mapping();
  m.dimensions[0].levels.pop_back();
  EXPECT_EQ(error_of([&] { validate_mapping(m, header, mini_model()); }), ErrorCode::MappingError);
  m = mini_mapping();
  m.dimensions[0].identity.clear();
  EXPECT_EQ(error_of([&] { validate_mapping(m, header, mini_model()); }), ErrorCode::MappingError);
  m = mini_mapping();
  m.dimensions.pop_back();
  EXPECT_EQ(error_of([&] { validate_mapping(m, header, mini_model()); }), ErrorCode::MappingError);
}

TEST(Mapping, BucketRules) {
  const auto header = mini_records().header;
  auto m = mini_mapping();
  auto& range = m.dimensions[0].levels[1].attributes[0];
  range.field = "age";
  range.buckets = {{60, 69, "60-69"}, {50, 59, "50-59"}};
  EXPECT_NO_THROW(validate_mapping(m, header, mini_model()));
  range.buckets = {{50, 60, "50-60"}, {60, 69, "60-69"}};
  EXPECT_EQ(error_of([&] { validate_mapping(m, header, mini_model()); }), ErrorCode::MappingError);
  range.buckets = {{59, 50, "x"}};
  EXPECT_EQ(error_of([&] { validate_mapping(m, header, mini_model()); }), ErrorCode::MappingError);
}

TEST(Mapping, GoalTree) {
  const auto g = goal_tree(mini_mapping());
  EXPECT_EQ(g, tree("Suspicious_region",
                    {attr("regions"), attr("length"), entity("Patient", {attr("patient_id"), attr("age"), attr("age_group")}),
                     entity("Digitizer", {attr("digitizer")})}));
}

TEST(Generate, MiniMirror) {
  const auto docs = generate_warehouse(mini_records(), mini_mapping(), mini_model());
  const auto contents = parse_warehouse_documents(mini_model(), docs);
  EXPECT_TRUE(check_integrity(contents).empty());
  const auto store = WarehouseStore::build(contents);
  EXPECT_EQ(store.fact_count(), 4u);
  EXPECT_EQ(store.dimension("Patient").members().size(), 5u);
  EXPECT_EQ(store.dimension("Digitizer").members().size(), 2u);
  const auto t = evaluate(store, validate_query(mini_model(), parse_query(
      "FROM Suspicious_region WHERE Patient.Patient.Patient_age = 58 SELECT sum(Number_of_regions)")));
  EXPECT_EQ(std::get<std::int64_t>(t.rows.at(0).at(0)), 9);
}

TEST(Generate, MemberIdsFollowFirstAppearance) {
  const auto c = build_warehouse(mini_records(), mini_mapping(), mini_model());
  const auto& patients = c.members[0];
  ASSERT_EQ(patients.size(), 5u);
  EXPECT_EQ(patients[0].id, "m000001");
  EXPECT_EQ(patients[0].level, "Patient");
  EXPECT_EQ(patients[0].roll_up, (std::vector<std::string>{"m000002"}));
  EXPECT_EQ(c.facts[0][2].dim_refs[0], "m000001");
  EXPECT_EQ(member_id(12), "m000012");
}

TEST(Generate, EmptySource) {
  const auto records = read_delimited("");
  const auto docs = generate_warehouse(records, mini_mapping(), mini_model());
  const auto store = store_from(docs, mini_model());
  EXPECT_EQ(store.fact_count(), 0u);
  EXPECT_EQ(store.member_count(), 0u);
}

TEST(Generate, IdenticalIdentitiesShareAMember) {
  const auto records = read_delimited("patient_id,age,age_group,digitizer,regions,length\n"
                                      "P-9,40,40-49,x,1,1.0\nP-9,40,40-49,x,2,2.0\n");
  const auto c = build_warehouse(records, mini_mapping(), mini_model());
  EXPECT_EQ(c.members[0].size(), 2u);
  EXPECT_EQ(c.facts[0][0].dim_refs, c.facts[0][1].dim_refs);
}

TEST(Generate, BucketsSynthesizeCoarseMembers) {
  auto m = mini_mapping();
  auto& range = m.dimensions[0].levels[1].attributes[0];
  range.field = "age";
  range.buckets = {{50, 59, "50s"}, {60, 69, "60s"}};
  const auto store = store_from(generate_warehouse(mini_records(), m, mini_model()), mini_model());
  const auto t = evaluate(store, validate_query(mini_model(), parse_query(
      "FROM Suspicious_region WHERE Patient.AgeGroup.range = '50s' SELECT sum(Number_of_regions)")));
  EXPECT_EQ(std::get<std::int64_t>(t.rows.at(0).at(0)), 9);
  range.buckets = {{60, 69, "60s"}};
  EXPECT_EQ(error_of([&] { build_warehouse(mini_records(), m, mini_model()); }), ErrorCode::MappingError);
}

TEST(Generate, TypeErrorsNameTheRow) {
  auto records = mini_records();
  records.rows[2][4] = "many";
  try {
    build_warehouse(records, mini_mapping(), mini_model());
    FAIL() << "expected TypeError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TypeError);
    EXPECT_NE(std::string(e.what()).find("row 4"), std::string::npos) << e.what();
  }
}

TEST(Generate, EmptyMeasureCellIsNull) {
  auto records = mini_records();
  records.rows[0][5] = "";
  const auto c = build_warehouse(records, mini_mapping(), mini_model());
  EXPECT_FALSE(c.facts[0][0].measures[1].has_value());
}

TEST(Generate, UnknownFieldIsAMappingError) {
  auto m = mini_mapping();
  m.dimensions[1].levels[0].attributes[0].field = "scanner";
  EXPECT_EQ(error_of([&] { generate_warehouse(mini_records(), m, mini_model()); }), ErrorCode::MappingError);
}

TEST(Generate, Deterministic) {
  testkit::Rng rng(31);
  for (int i = 0; i < 10; ++i) {
    const auto ec = testkit::random_etl_case(rng);
    EXPECT_EQ(generate_warehouse(ec.records, ec.mapping, ec.model),
              generate_warehouse(ec.records, ec.mapping, ec.model));
  }
}

TEST(Generate, ClosureAndDeduplication) {
  testkit::Rng rng(32);
  for (int i = 0; i < 20; ++i) {
    const auto ec = testkit::random_etl_case(rng);
    const auto contents = parse_warehouse_documents(ec.model, generate_warehouse(ec.records, ec.mapping, ec.model));
    ASSERT_TRUE(check_integrity(contents).empty());
    const auto store = WarehouseStore::build(contents);
    EXPECT_EQ(store.fact_count(), ec.records.rows.size());
    for (const auto& dim : store.dimensions())
      EXPECT_EQ(dim.level_members(0).size(), testkit::distinct_identities(ec, dim.id())) << dim.id();
  }
}
