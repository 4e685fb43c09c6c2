#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "xwacoda/cube.hpp"
#include "xwacoda/etl.hpp"
#include "xwacoda/query.hpp"
#include "xwacoda/store.hpp"

namespace xwacoda::testkit {

using Rng = std::mt19937_64;

struct WarehouseShape {
  int max_dimensions = 5;
  int max_levels = 3;
  int max_facts = 1000;
  int max_base_members = 30;
  double null_measure_rate = 0.05;
};

/// Strict, symmetric, referentially consistent warehouse over a random
/// schema: one fact class "F" with an integer measure "n" and a decimal
/// measure "x"; dimensions D0.. with levels L0 (finest)..; every level has
/// one to three typed attributes.
WarehouseContents random_warehouse(Rng& rng, const WarehouseShape& shape = {});

struct QueryShape {
  int max_predicates = 3;
  int max_group_keys = 2;
  int max_aggregates = 3;
};

/// Query accepted by validate_query for `contents`; literals are drawn mostly
/// from values present in the members so that selections are non-trivial.
AnalyticQuery random_query(Rng& rng, const WarehouseContents& contents, const QueryShape& shape = {});

/// Cube spec with one or two axes, each below its coarsest level when the
/// dimension has more than one level.
CubeSpec random_cube_spec(Rng& rng, const WarehouseContents& contents);

/// Model with fact class Suspicious_region, measures Region_length (decimal)
/// and Number_of_regions (integer) and ten dimensions.
WarehouseModel case_study_model();
WarehouseContents case_study_warehouse(Rng& rng, std::size_t facts);

/// Twenty fixed queries over the case-study schema.
std::vector<std::string> case_study_queries();

/// `facts` facts over `dimensions` dimensions with two levels each and
/// `members_per_dimension` base members; for load and scan benchmarks.
WarehouseContents bulk_warehouse(Rng& rng, std::size_t facts, std::size_t dimensions,
                                 std::size_t members_per_dimension);

struct EtlCase {
  WarehouseModel model;
  etl::MappingConfig mapping;
  etl::SourceRecordSet records;
  std::string csv;
};

/// Records drawn from a random warehouse, flattened one row per fact, with a
/// mapping that reads every attribute and measure back. Some rows repeat an
/// earlier member's identity so deduplication is exercised.
EtlCase random_etl_case(Rng& rng);

/// Distinct identity tuples of `dimension` in `ec.records`.
std::size_t distinct_identities(const EtlCase& ec, const std::string& dimension);

std::string to_csv(const etl::SourceRecordSet& records);

}  // namespace xwacoda::testkit
