#include <gtest/gtest.h>

#include "generators.hpp"
#include "test_util.hpp"
#include "xwacoda/error.hpp"
#include "xwacoda/model.hpp"
#include "xwacoda/store.hpp"

using namespace xwacoda;

namespace {

WarehouseModel mini_model() { return parse_model(read_file(testkit::mini_dir() / "dw-model.xml")); }

ErrorCode code_of(std::string_view doc) {
  try {
    parse_model(doc);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << doc;
  return ErrorCode::IoError;
}

std::vector<std::string> codes(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

}  // namespace

TEST(ParseModel, MiniFixture) {
  const auto m = mini_model();
  ASSERT_EQ(m.dimensions.size(), 2u);
  EXPECT_EQ(m.dimensions[0].id, "Patient");
  ASSERT_EQ(m.dimensions[0].levels.size(), 2u);
  EXPECT_EQ(m.dimensions[0].levels[0].id, "Patient");
  EXPECT_EQ(m.dimensions[0].levels[1].id, "AgeGroup");
  EXPECT_EQ(m.dimensions[1].id, "Digitizer");
  EXPECT_EQ(m.dimensions[1].levels.size(), 1u);
  ASSERT_EQ(m.fact_classes.size(), 1u);
  const auto& fc = m.fact_classes[0];
  EXPECT_EQ(fc.id, "Suspicious_region");
  EXPECT_EQ(fc.measures.size(), 2u);
  EXPECT_EQ(fc.dimension_refs, (std::vector<std::string>{"Patient", "Digitizer"}));
  EXPECT_EQ(fc.find_measure("Region_length")->value_type, ValueType::Decimal);
  EXPECT_EQ(m.dimensions[0].document_path, "dimension_Patient.xml");
}

TEST(ParseModel, MinimalModel) {
  const auto m = parse_model(R"(<DW-model>
    <dimension id="D" path="d.xml"><Level id="L"><attribute id="a" type="string"/></Level></dimension>
    <FactDoc id="F" path="f.xml"><measure id="m" type="integer"/><dimension-ref dim-id="D"/></FactDoc>
  </DW-model>)");
  ASSERT_EQ(m.dimensions.size(), 1u);
  ASSERT_EQ(m.dimensions[0].levels.size(), 1u);
  ASSERT_EQ(m.dimensions[0].levels[0].attributes.size(), 1u);
  ASSERT_EQ(m.fact_classes.size(), 1u);
  EXPECT_EQ(m.fact_classes[0].measures.size(), 1u);
}

TEST(ParseModel, CaseStudySchema) {
  const auto m = parse_model(serialize_model(testkit::case_study_model()));
  const std::vector<std::string> expected{"Patient",       "Lesion_type",          "Assessment", "Subtlety",
                                          "Pathology",     "Date_of_study",        "Date_of_digitization",
                                          "Digitizer",     "Scanner_image",        "Boundary"};
  std::vector<std::string> ids;
  for (const auto& d : m.dimensions) ids.push_back(d.id);
  EXPECT_EQ(ids, expected);
  const auto* fc = m.find_fact_class("Suspicious_region");
  ASSERT_NE(fc, nullptr);
  EXPECT_EQ(fc->measures.size(), 2u);
  EXPECT_NE(fc->find_measure("Region_length"), nullptr);
  EXPECT_NE(fc->find_measure("Number_of_regions"), nullptr);
  EXPECT_EQ(fc->dimension_refs, expected);
}

TEST(ParseModel, SchemaViolations) {
  const std::string dim = R"(<dimension id="D" path="d.xml"><Level id="L"><attribute id="a" type="string"/></Level></dimension>)";
  const std::string fact = R"(<FactDoc id="F" path="f.xml"><measure id="m" type="integer"/><dimension-ref dim-id="D"/></FactDoc>)";
  EXPECT_EQ(code_of("<DW-model>" + dim + fact), ErrorCode::MalformedXml);
  EXPECT_EQ(code_of("<DW-model><cube/>" + dim + fact + "</DW-model>"), ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of("<Model>" + dim + fact + "</Model>"), ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of(R"(<DW-model><dimension path="d.xml"><Level id="L"><attribute id="a" type="string"/></Level></dimension>)" + fact + "</DW-model>"),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of("<DW-model>" + dim + dim + fact + "</DW-model>"), ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of("<DW-model>" + dim + R"(<FactDoc id="F" path="f.xml"><measure id="m" type="integer"/><dimension-ref dim-id="Ghost"/></FactDoc></DW-model>)"),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of("<DW-model>" + dim + R"(<FactDoc id="F" path="f.xml"><measure id="m" type="string"/><dimension-ref dim-id="D"/></FactDoc></DW-model>)"),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of(R"(<DW-model><dimension id="D" path="d.xml" colour="red"><Level id="L"><attribute id="a" type="string"/></Level></dimension>)" + fact + "</DW-model>"),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of(R"(<DW-model><dimension id="D" path="d.xml"><Level id="L"><attribute id="a" type="float"/></Level></dimension>)" + fact + "</DW-model>"),
            ErrorCode::SchemaViolation);
}

TEST(SerializeModel, RoundTrips) {
  for (const auto& m : {mini_model(), testkit::case_study_model()}) {
    const auto text = serialize_model(m);
    const auto back = parse_model(text);
    EXPECT_EQ(back, m);
    EXPECT_EQ(serialize_model(back), text);
    EXPECT_EQ(back.dimensions[0].levels[0].id, m.dimensions[0].levels[0].id);
  }
}

TEST(SerializeModel, RandomModelsRoundTrip) {
  testkit::Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    const auto m = testkit::random_warehouse(rng).model;
    EXPECT_EQ(parse_model(serialize_model(m)), m);
  }
}

TEST(WarehouseModelEquality, IgnoresDimensionOrderButNotLevelOrder) {
  auto m = mini_model();
  auto swapped = m;
  std::swap(swapped.dimensions[0], swapped.dimensions[1]);
  EXPECT_EQ(m, swapped);
  auto reordered = m;
  std::swap(reordered.dimensions[0].levels[0], reordered.dimensions[0].levels[1]);
  EXPECT_NE(m, reordered);
}

TEST(ValidateModel, MiniIsValid) { EXPECT_TRUE(validate_model(mini_model()).empty()); }

TEST(ValidateModel, DanglingDimensionRef) {
  auto m = mini_model();
  m.fact_classes[0].dimension_refs.push_back("Ghost");
  const auto ds = validate_model(m);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, "DANGLING_DIMENSION_REF");
}

TEST(ValidateModel, DuplicateLevelId) {
  auto m = mini_model();
  m.dimensions[0].levels[1].id = "Patient";
  const auto ds = validate_model(m);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, "DUPLICATE_LEVEL_ID");
}

TEST(ValidateModel, OtherInvariants) {
  auto m = mini_model();
  m.dimensions[1].id = "Patient";
  m.fact_classes[0].dimension_refs = {"Patient"};
  EXPECT_EQ(codes(validate_model(m)), std::vector<std::string>{"DUPLICATE_DIMENSION_ID"});

  m = mini_model();
  m.fact_classes[0].measures[0].value_type = ValueType::String;
  EXPECT_EQ(codes(validate_model(m)), std::vector<std::string>{"NON_NUMERIC_MEASURE"});

  m = mini_model();
  m.dimensions[0].levels[0].attributes[0].id = "Patient age";
  EXPECT_EQ(codes(validate_model(m)), std::vector<std::string>{"INVALID_ID"});

  m = mini_model();
  m.dimensions[1].levels.clear();
  EXPECT_EQ(codes(validate_model(m)), std::vector<std::string>{"NO_LEVELS"});

  m = mini_model();
  m.dimensions.clear();
  m.fact_classes.clear();
  EXPECT_EQ(codes(validate_model(m)), (std::vector<std::string>{"NO_DIMENSIONS", "NO_FACT_CLASSES"}));
}
