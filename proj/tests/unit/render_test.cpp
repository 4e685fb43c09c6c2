#include <gtest/gtest.h>

#include "generators.hpp"
#include "test_util.hpp"
#include "xwacoda/error.hpp"
#include "xwacoda/render.hpp"

using namespace xwacoda;

namespace {

const WarehouseStore& mini_store() {
  static const auto s = load_warehouse(testkit::mini_dir());
  return s;
}

ResultTable run(std::string_view text) {
  return evaluate(mini_store(), validate_query(mini_store().model(), parse_query(text)));
}

std::string sp(std::size_t n) { return std::string(n, ' '); }

}  // namespace

TEST(RenderTable, DelimitedIsTabSeparated) {
  const auto out = render_table(run("FROM Suspicious_region GROUP BY Patient.AgeGroup SELECT sum(Number_of_regions)"),
                                TableFormat::Delimited);
  EXPECT_EQ(out,
            "Patient.AgeGroup\tPatient.AgeGroup.range\tsum(Number_of_regions)\n"
            "g50\t50-59\t9\n"
            "g60\t60-69\t2\n");
}

TEST(RenderTable, SingleValueDelimited) {
  const auto out = render_table(
      run("FROM Suspicious_region WHERE Patient.Patient.Patient_age = 58 SELECT sum(Number_of_regions)"),
      TableFormat::Delimited);
  EXPECT_EQ(out, "sum(Number_of_regions)\n9\n");
}

TEST(RenderTable, TextAlignsColumns) {
  const auto out = render_table(run("FROM Suspicious_region GROUP BY Digitizer.Digitizer SELECT count(*)"),
                                TableFormat::Text);
  EXPECT_EQ(out,
            "Digitizer.Digitizer  Digitizer.Digitizer.name  count(*)\n"
            "-------------------  ------------------------  --------\n"
            "d1" + sp(19) + "lumisys" + sp(26) + "2\n"
            "d2" + sp(19) + "howtek" + sp(27) + "2\n");
}

TEST(RenderTable, NullCellsAreBlank) {
  ResultTable t;
  t.columns = {{"avg(x)", ColumnRole::Aggregate, ColumnType::Decimal}};
  t.rows = {{Cell{}}};
  EXPECT_EQ(render_table(t, TableFormat::Delimited), "avg(x)\n\n");
}

TEST(RenderPivot, TwoAxesGrid) {
  CubeSpec s;
  s.fact_class = "Suspicious_region";
  s.axes = {{"Patient", "Patient"}, {"Digitizer", "Digitizer"}};
  s.measure = "Number_of_regions";
  s.aggregate = AggregateFunction::Sum;
  const std::string corner = "Patient.Patient \\ Digitizer.Digitizer";
  EXPECT_EQ(render_pivot(build_cube(mini_store(), s)),
            corner + "  d1  d2\n" + std::string(corner.size(), '-') + "  --  --\n" +
            "p1" + sp(corner.size() - 2) + "   3   5\n" +
            "p2" + sp(corner.size() - 2) + "   2\n" +
            "p3" + sp(corner.size() - 2) + "       1\n");
}

TEST(RenderPivot, OneAxisAndScalar) {
  CubeSpec s;
  s.fact_class = "Suspicious_region";
  s.axes = {{"Digitizer", "Digitizer"}};
  const auto cube = build_cube(mini_store(), s);
  EXPECT_EQ(render_pivot(cube),
            "Digitizer.Digitizer  count(*)\n"
            "-------------------  --------\n"
            "d1" + sp(26) + "2\n"
            "d2" + sp(26) + "2\n");
  EXPECT_EQ(render_pivot(slice(cube, "Digitizer", "d1")), "count(*)\n--------\n       2\n");
}

TEST(RenderPivot, DecimalValues) {
  CubeSpec s;
  s.fact_class = "Suspicious_region";
  s.axes = {{"Digitizer", "Digitizer"}};
  s.measure = "Region_length";
  s.aggregate = AggregateFunction::Avg;
  const auto cube = build_cube(mini_store(), s);
  EXPECT_FALSE(cube.integral());
  EXPECT_EQ(format_cube_value(cube, cube.value_at({"d1"})), "8.75");
  EXPECT_EQ(format_cube_value(cube, std::nullopt), "");
}

TEST(RenderPivot, MoreThanTwoAxesIsRejected) {
  testkit::Rng rng(3);
  WarehouseContents c;
  do c = testkit::random_warehouse(rng); while (c.model.dimensions.size() < 3);
  const auto store = WarehouseStore::build(c);
  CubeSpec s;
  s.fact_class = "F";
  for (std::size_t d = 0; d < 3; ++d) s.axes.push_back({c.model.dimensions[d].id, c.model.dimensions[d].levels[0].id});
  try {
    render_pivot(build_cube(store, s));
    FAIL() << "expected ValidationError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
  }
}
