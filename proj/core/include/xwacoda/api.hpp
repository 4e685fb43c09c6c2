#pragma once

#include <string>
#include <string_view>

#include "xwacoda/cube.hpp"
#include "xwacoda/query.hpp"
#include "xwacoda/store.hpp"

namespace xwacoda::api {

/// Transport-independent HTTP answer. Error bodies look like
/// {"error": {"code": "VALIDATION_ERROR", "message": "...", "position": 12}}.
struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// GET /api/model
Response model(const WarehouseStore& store);
/// POST /api/query; body is query text or {"query": "..."}.
Response query(const WarehouseStore& store, std::string_view body);
/// POST /api/cube; body is a cube spec.
Response cube(const WarehouseStore& store, std::string_view body);
/// POST /api/cube/op; body is {"spec": {...}, "op": "roll_up" | "drill_down" |
/// "slice" | "dice", "dimension": "...", "member": "...", "keep": {dim: [ids]}}.
Response cube_op(const WarehouseStore& store, std::string_view body);

Response not_found(std::string_view path);

std::string model_json(const WarehouseStore& store);
std::string result_table_json(const ResultTable& table);
std::string cube_json(const Cube& cube, const WarehouseModel& model);

/// Cube spec wire form:
///   {"fact_class": "F", "axes": [{"dimension": "D", "level": "L"}],
///    "measure": "M" | "*", "aggregate": "sum",
///    "predicates": [{"dimension", "level", "attribute", "op": "=", "value": 58}],
///    "filters": [{"dimension", "level", "members": ["m1"]}]}
/// Throws Error(ValidationError) on a malformed spec.
CubeSpec parse_cube_spec(std::string_view json);
std::string cube_spec_json(const CubeSpec& spec);

}  // namespace xwacoda::api
