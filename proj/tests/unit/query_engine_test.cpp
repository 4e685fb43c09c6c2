#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "oracle.hpp"
#include "test_util.hpp"
#include "xwacoda/error.hpp"
#include "xwacoda/query.hpp"
#include "xwacoda/store.hpp"

using namespace xwacoda;

namespace {

const WarehouseContents& mini_contents() {
  static const auto c = read_warehouse(testkit::mini_dir());
  return c;
}

const WarehouseStore& mini_store() {
  static const auto s = WarehouseStore::build(mini_contents());
  return s;
}

ResultTable run(const WarehouseStore& store, std::string_view text) {
  return evaluate(store, validate_query(store.model(), parse_query(text)));
}

std::vector<std::string> member_ids(const WarehouseStore& store, const std::string& dim,
                                    const std::vector<MemberIndex>& ms) {
  std::vector<std::string> out;
  for (auto m : ms) out.push_back(store.dimension(dim).member(m).id);
  return out;
}

Predicate pred(std::string d, std::string l, std::string a, Comparator op, Value v) {
  return Predicate{std::move(d), std::move(l), std::move(a), op, std::move(v)};
}

std::int64_t count_of(const ResultTable& t, std::size_t row, std::size_t col) {
  return std::get<std::int64_t>(t.rows.at(row).at(col));
}

// MINI with p1 rolling up to both age groups.
WarehouseContents mini_multi_parent() {
  auto c = mini_contents();
  for (auto& m : c.members[0]) {
    if (m.id == "p1") m.roll_up = {"g50", "g60"};
    if (m.id == "g60") m.drill_down = {"p1", "p2"};
  }
  return c;
}

}  // namespace

TEST(ResolveSelection, BaseLevelPredicate) {
  const auto sel = resolve_selection(mini_store(), pred("Patient", "Patient", "Patient_age", Comparator::Eq,
                                                        Value{std::int64_t{58}}));
  EXPECT_EQ(member_ids(mini_store(), "Patient", sel), (std::vector<std::string>{"p1", "p3"}));
}

TEST(ResolveSelection, CoarseLevelPredicateDescends) {
  const auto sel = resolve_selection(mini_store(), pred("Patient", "AgeGroup", "range", Comparator::Eq,
                                                        Value{std::string("50-59")}));
  EXPECT_EQ(member_ids(mini_store(), "Patient", sel), (std::vector<std::string>{"p1", "p3"}));
}

TEST(ResolveSelection, NoMatchIsEmpty) {
  EXPECT_TRUE(resolve_selection(mini_store(), pred("Patient", "Patient", "Patient_age", Comparator::Eq,
                                                   Value{std::int64_t{999}}))
                  .empty());
}

TEST(ResolveSelection, OrderingComparators) {
  const auto sel = resolve_selection(mini_store(), pred("Patient", "Patient", "Patient_age", Comparator::Gt,
                                                        Value{std::int64_t{58}}));
  EXPECT_EQ(member_ids(mini_store(), "Patient", sel), (std::vector<std::string>{"p2"}));
  const auto ne = resolve_selection(mini_store(), pred("Patient", "AgeGroup", "range", Comparator::Ne,
                                                       Value{std::string("50-59")}));
  EXPECT_EQ(member_ids(mini_store(), "Patient", ne), (std::vector<std::string>{"p2"}));
}

TEST(ResolveSelection, ContradictoryAncestorsInLenientStore) {
  const auto store = WarehouseStore::build(mini_multi_parent(), HierarchyMode::Lenient);
  try {
    resolve_selection(store, pred("Patient", "AgeGroup", "range", Comparator::Eq, Value{std::string("50-59")}));
    FAIL() << "expected NonStrictHierarchy";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonStrictHierarchy);
  }
}

TEST(Evaluate, AgeSelectionSum) {
  const auto t = run(mini_store(),
                     "FROM Suspicious_region WHERE Patient.Patient.Patient_age = 58 SELECT sum(Number_of_regions)");
  ASSERT_EQ(t.rows.size(), 1u);
  ASSERT_EQ(t.columns.size(), 1u);
  EXPECT_EQ(t.columns[0].name, "sum(Number_of_regions)");
  EXPECT_EQ(t.columns[0].type, ColumnType::Integer);
  EXPECT_EQ(count_of(t, 0, 0), 9);
}

TEST(Evaluate, GroupByAgeGroup) {
  const auto t = run(mini_store(), "FROM Suspicious_region GROUP BY Patient.AgeGroup SELECT sum(Number_of_regions)");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.columns[0].role, ColumnRole::GroupMember);
  EXPECT_EQ(t.columns[1].role, ColumnRole::GroupAttribute);
  EXPECT_EQ(t.rows[0][0], Cell{std::string("g50")});
  EXPECT_EQ(t.rows[0][1], Cell{std::string("50-59")});
  EXPECT_EQ(count_of(t, 0, 2), 9);
  EXPECT_EQ(t.rows[1][0], Cell{std::string("g60")});
  EXPECT_EQ(count_of(t, 1, 2), 2);
}

TEST(Evaluate, CountStarWithoutPredicates) {
  const auto t = run(mini_store(), "FROM Suspicious_region SELECT count(*)");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(count_of(t, 0, 0), 4);
}

TEST(Evaluate, DecimalAggregates) {
  const auto t = run(mini_store(),
                     "FROM Suspicious_region GROUP BY Digitizer.Digitizer "
                     "SELECT avg(Region_length), min(Region_length), max(Number_of_regions), count(Region_length)");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(std::get<double>(t.rows[0][2]), 8.75);
  EXPECT_DOUBLE_EQ(std::get<double>(t.rows[0][3]), 7.0);
  EXPECT_EQ(count_of(t, 0, 4), 3);
  EXPECT_EQ(count_of(t, 0, 5), 2);
  EXPECT_DOUBLE_EQ(std::get<double>(t.rows[1][2]), 7.625);
  EXPECT_EQ(count_of(t, 1, 4), 5);
}

TEST(Evaluate, ConjunctionAcrossDimensions) {
  const auto t = run(mini_store(),
                     "FROM Suspicious_region WHERE Patient.AgeGroup.range = '50-59' AND Digitizer.Digitizer.name = "
                     "'howtek' SELECT sum(Number_of_regions), count(*)");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(count_of(t, 0, 0), 6);
  EXPECT_EQ(count_of(t, 0, 1), 2);
}

TEST(Evaluate, EmptySelectionSemantics) {
  const auto counted =
      run(mini_store(), "FROM Suspicious_region WHERE Patient.Patient.Patient_age = 999 SELECT count(*)");
  ASSERT_EQ(counted.rows.size(), 1u);
  EXPECT_EQ(count_of(counted, 0, 0), 0);
  const auto summed =
      run(mini_store(), "FROM Suspicious_region WHERE Patient.Patient.Patient_age = 999 SELECT sum(Region_length)");
  EXPECT_TRUE(summed.rows.empty());
  const auto grouped = run(mini_store(),
                           "FROM Suspicious_region WHERE Patient.Patient.Patient_age = 999 GROUP BY Patient.AgeGroup "
                           "SELECT count(*)");
  EXPECT_TRUE(grouped.rows.empty());
}

TEST(Evaluate, EmptyStoreCountsZero) {
  auto c = mini_contents();
  c.facts[0].clear();
  const auto store = WarehouseStore::build(std::move(c));
  const auto t = run(store, "FROM Suspicious_region SELECT count(*)");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(count_of(t, 0, 0), 0);
}

TEST(Evaluate, NullMeasuresAreExcluded) {
  auto c = mini_contents();
  c.facts[0][0].measures[1].reset();
  const auto store = WarehouseStore::build(std::move(c));
  const auto t = run(store, "FROM Suspicious_region SELECT count(*), count(Region_length), sum(Region_length)");
  EXPECT_EQ(count_of(t, 0, 0), 4);
  EXPECT_EQ(count_of(t, 0, 1), 3);
  EXPECT_DOUBLE_EQ(std::get<double>(t.rows[0][2]), 22.25);
}

TEST(Evaluate, AllNullGroupYieldsNullCell) {
  auto c = mini_contents();
  for (auto& f : c.facts[0]) f.measures[1].reset();
  const auto store = WarehouseStore::build(std::move(c));
  const auto t = run(store, "FROM Suspicious_region GROUP BY Digitizer.Digitizer SELECT avg(Region_length)");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(t.rows[0][2]));
}

TEST(Evaluate, MemberFilterRestrictsFacts) {
  const std::vector<MemberFilter> filters{{"Digitizer", "Digitizer", {"d1"}}};
  const auto q = validate_query(mini_store().model(),
                                parse_query("FROM Suspicious_region SELECT sum(Number_of_regions)"));
  const auto t = evaluate(mini_store(), q, filters);
  EXPECT_EQ(count_of(t, 0, 0), 5);
}

TEST(Evaluate, RollUpThroughMultiParentMemberIsRejected) {
  const auto store = WarehouseStore::build(mini_multi_parent(), HierarchyMode::Lenient);
  try {
    run(store, "FROM Suspicious_region GROUP BY Patient.AgeGroup SELECT count(*)");
    FAIL() << "expected NonStrictHierarchy";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonStrictHierarchy);
  }
  EXPECT_EQ(count_of(run(store, "FROM Suspicious_region SELECT count(*)"), 0, 0), 4);
}

TEST(Oracle, AgreesOnMiniExamples) {
  for (const char* text : {
           "FROM Suspicious_region WHERE Patient.Patient.Patient_age = 58 SELECT sum(Number_of_regions)",
           "FROM Suspicious_region GROUP BY Patient.AgeGroup SELECT sum(Number_of_regions)",
           "FROM Suspicious_region SELECT count(*)",
       }) {
    const auto q = validate_query(mini_store().model(), parse_query(text));
    const auto mismatch = testkit::compare_tables(evaluate(mini_store(), q), testkit::oracle_evaluate(mini_contents(), q));
    EXPECT_FALSE(mismatch) << text << ": " << *mismatch;
  }
}

TEST(Oracle, AgreesOnRandomWarehouses) {
  testkit::Rng rng(11);
  testkit::WarehouseShape shape;
  shape.max_facts = 300;
  for (int i = 0; i < 40; ++i) {
    const auto c = testkit::random_warehouse(rng, shape);
    const auto store = WarehouseStore::build(c);
    for (int j = 0; j < 5; ++j) {
      const auto q = testkit::random_query(rng, c);
      const auto mismatch = testkit::compare_tables(evaluate(store, q), testkit::oracle_evaluate(c, q));
      ASSERT_FALSE(mismatch) << format_query(q) << ": " << *mismatch;
    }
  }
}

TEST(Laws, AddingAPredicateNeverRaisesACount) {
  testkit::Rng rng(12);
  for (int i = 0; i < 30; ++i) {
    const auto c = testkit::random_warehouse(rng);
    const auto store = WarehouseStore::build(c);
    auto q = testkit::random_query(rng, c);
    q.aggregates = {AggregateSpec{}};
    auto extra = testkit::random_query(rng, c, {3, 0, 1});
    if (extra.predicates.empty()) continue;
    const auto before = evaluate(store, q);
    auto narrowed = q;
    narrowed.predicates.push_back(extra.predicates.front());
    const auto after = evaluate(store, narrowed);
    const auto count_col = before.columns.size() - 1;
    for (const auto& row : after.rows) {
      const auto it = std::find_if(before.rows.begin(), before.rows.end(), [&](const auto& r) {
        return std::equal(r.begin(), r.begin() + count_col, row.begin());
      });
      ASSERT_NE(it, before.rows.end());
      EXPECT_LE(std::get<std::int64_t>(row[count_col]), std::get<std::int64_t>((*it)[count_col]));
    }
  }
}

TEST(Laws, BaseLevelGroupsPartitionTheFacts) {
  testkit::Rng rng(13);
  for (int i = 0; i < 30; ++i) {
    const auto c = testkit::random_warehouse(rng);
    const auto store = WarehouseStore::build(c);
    AnalyticQuery q;
    q.fact_class = "F";
    for (std::size_t d = 0; d < std::min<std::size_t>(2, c.model.dimensions.size()); ++d)
      q.group_by.push_back({c.model.dimensions[d].id, c.model.dimensions[d].levels[0].id});
    q.aggregates = {AggregateSpec{}};
    const auto t = evaluate(store, q);
    std::int64_t total = 0;
    for (const auto& row : t.rows) total += std::get<std::int64_t>(row.back());
    EXPECT_EQ(total, static_cast<std::int64_t>(c.facts[0].size()));
  }
}

TEST(Laws, CoarseSelectionIsTheUnionOfItsChildren) {
  testkit::Rng rng(14);
  for (int i = 0; i < 30; ++i) {
    const auto c = testkit::random_warehouse(rng);
    const auto store = WarehouseStore::build(c);
    for (const auto& dim : store.dimensions()) {
      if (dim.level_count() < 2) continue;
      const auto& top = dim.def().levels.back();
      for (MemberIndex g : dim.level_members(dim.level_count() - 1)) {
        const auto& v = dim.member(g).attributes[0];
        if (!v) continue;
        const auto sel = resolve_selection(store, pred(dim.id(), top.id, top.attributes[0].id, Comparator::Eq, *v));
        // Every selected base member's top ancestor carries the value.
        for (MemberIndex b : sel) {
          MemberIndex a = b;
          while (!dim.parents(a).empty()) a = dim.parents(a)[0];
          EXPECT_EQ(dim.member(a).attributes[0], v);
        }
        // Every base member below a matching top member is selected.
        for (MemberIndex b : dim.level_members(0)) {
          MemberIndex a = b;
          while (!dim.parents(a).empty()) a = dim.parents(a)[0];
          if (dim.member(a).attributes[0] == v) EXPECT_TRUE(std::binary_search(sel.begin(), sel.end(), b));
        }
      }
    }
  }
}

TEST(Laws, EvaluationIsDeterministic) {
  testkit::Rng rng(15);
  const auto c = testkit::random_warehouse(rng);
  const auto store = WarehouseStore::build(c);
  for (int i = 0; i < 20; ++i) {
    const auto q = testkit::random_query(rng, c);
    const auto a = evaluate(store, q);
    const auto b = evaluate(store, q);
    EXPECT_EQ(a.columns, b.columns);
    EXPECT_EQ(a.rows, b.rows);
  }
}
