#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "oracle.hpp"
#include "xwacoda/cube.hpp"
#include "xwacoda/query.hpp"
#include "xwacoda/store.hpp"

using namespace xwacoda;

namespace {

constexpr std::size_t kDimensions = 10;
constexpr std::size_t kMembers = 200;

const char* const kStarQuery =
    "FROM F WHERE B0.Member.v < 50 AND B1.Group.g = 3 GROUP BY B2.Group SELECT count(*), sum(x)";

WarehouseContents bulk(std::size_t facts) {
  testkit::Rng rng(facts);
  return testkit::bulk_warehouse(rng, facts, kDimensions, kMembers);
}

void BM_ParseDocuments(benchmark::State& state) {
  const auto contents = bulk(static_cast<std::size_t>(state.range(0)));
  const auto documents = serialize_warehouse_documents(contents);
  std::size_t bytes = 0;
  for (const auto& [path, text] : documents) bytes += text.size();
  for (auto _ : state) benchmark::DoNotOptimize(parse_warehouse_documents(contents.model, documents));
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes * state.iterations()));
}
BENCHMARK(BM_ParseDocuments)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_BuildStore(benchmark::State& state) {
  const auto contents = bulk(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(WarehouseStore::build(contents));
  state.SetItemsProcessed(state.range(0) * state.iterations());
}
BENCHMARK(BM_BuildStore)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const auto store = WarehouseStore::build(bulk(static_cast<std::size_t>(state.range(0))));
  const auto q = validate_query(store.model(), parse_query(kStarQuery));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(store, q));
  state.SetItemsProcessed(state.range(0) * state.iterations());
}
BENCHMARK(BM_Evaluate)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMicrosecond);

void BM_OracleEvaluate(benchmark::State& state) {
  const auto contents = bulk(static_cast<std::size_t>(state.range(0)));
  const auto q = validate_query(contents.model, parse_query(kStarQuery));
  for (auto _ : state) benchmark::DoNotOptimize(testkit::oracle_evaluate(contents, q));
  state.SetItemsProcessed(state.range(0) * state.iterations());
}
BENCHMARK(BM_OracleEvaluate)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_BuildCubeAndRollUp(benchmark::State& state) {
  const auto store = WarehouseStore::build(bulk(static_cast<std::size_t>(state.range(0))));
  CubeSpec spec;
  spec.fact_class = "F";
  spec.axes = {{"B0", "Member"}, {"B1", "Member"}};
  spec.measure = "x";
  spec.aggregate = AggregateFunction::Sum;
  for (auto _ : state) benchmark::DoNotOptimize(roll_up(build_cube(store, spec), "B0", store));
  state.SetItemsProcessed(state.range(0) * state.iterations());
}
BENCHMARK(BM_BuildCubeAndRollUp)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_ParseQuery(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_query(kStarQuery));
}
BENCHMARK(BM_ParseQuery);

}  // namespace
BENCHMARK_MAIN();
