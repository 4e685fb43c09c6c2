#include "xwacoda/cli.hpp"

#include <filesystem>
#include <fstream>
#include <cctype>
#include <cmath>
#include <map>

#include <CLI11.hpp>

#include "xwacoda/cube.hpp"
#include "xwacoda/api.hpp"
#include "xwacoda/error.hpp"
#include "xwacoda/etl.hpp"
#include "xwacoda/query.hpp"
#include "xwacoda/render.hpp"
#include "xwacoda/server.hpp"
#include "xwacoda/store.hpp"

namespace xwacoda::cli {

namespace fs = std::filesystem;

namespace {

bool is_io_error(ErrorCode code) {
  return code == ErrorCode::FileNotFound || code == ErrorCode::IoError || code == ErrorCode::MalformedXml;
}

/// "@path" reads the file, anything else is taken literally.
std::string text_or_file(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') return read_file(arg.substr(1));
  return arg;
}

HierarchyMode mode_of(bool lenient) { return lenient ? HierarchyMode::Lenient : HierarchyMode::Strict; }

TableFormat format_of(const std::string& name) {
  return name == "delimited" ? TableFormat::Delimited : TableFormat::Text;
}

/// Loads a store for query-like commands; every failure is a load failure.
std::optional<WarehouseStore> load_for_reading(const std::string& dir, bool lenient, std::ostream& err) {
  try {
    return load_warehouse(dir, mode_of(lenient));
  } catch (const IntegrityError& e) {
    for (const auto& d : e.report()) err << to_string(d) << '\n';
  } catch (const Error& e) {
    err << error_code_name(e.code()) << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

std::pair<std::string, std::string> split_assignment(const std::string& arg, const char* option) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorCode::ValidationError, std::string(option) + " expects DIMENSION=VALUE, got '" + arg + "'");
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    if (end > start) out.push_back(text.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string render_cube(const Cube& cube, TableFormat format) {
  if (format == TableFormat::Text && cube.axes().size() <= 2) return render_pivot(cube);
  ResultTable table;
  for (const auto& axis : cube.axes())
    table.columns.push_back({axis.dimension + "." + axis.level, ColumnRole::GroupMember, ColumnType::String});
  const std::string label = AggregateSpec{cube.aggregate(), cube.measure()}.label();
  table.columns.push_back({label, ColumnRole::Aggregate, cube.integral() ? ColumnType::Integer : ColumnType::Decimal});
  for (const auto& [coord, value] : flatten(cube)) {
    std::vector<Cell> row(coord.begin(), coord.end());
    if (!value) {
      row.emplace_back(std::monostate{});
    } else if (cube.integral()) {
      row.emplace_back(static_cast<std::int64_t>(std::llround(*value)));
    } else {
      row.emplace_back(*value);
    }
    table.rows.push_back(std::move(row));
  }
  return render_table(table, format);
}

etl::SourceRecordSet read_source(const fs::path& path) {
  const std::string text = read_file(path);
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".xml") return etl::read_xml_records(text);
  return etl::read_delimited(text, ext == ".tsv" ? '\t' : ',');
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  f << bytes;
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

int cmd_validate(const std::string& dir, bool lenient, std::ostream& out, std::ostream& err) {
  try {
    const auto store = load_warehouse(dir, mode_of(lenient));
    out << "OK: " << store.fact_count() << " facts, " << store.member_count() << " members, "
        << store.model().dimensions.size() << " dimensions\n";
    return kExitOk;
  } catch (const IntegrityError& e) {
    for (const auto& d : e.report()) out << to_string(d) << '\n';
    return kExitFailure;
  } catch (const Error& e) {
    if (is_io_error(e.code())) {
      err << error_code_name(e.code()) << ": " << e.what() << '\n';
      return kExitIo;
    }
    out << error_code_name(e.code()) << ": " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_ingest(const std::vector<std::string>& sources, const std::string& mapping_path,
               const std::string& model_path, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  WarehouseModel model;
  etl::MappingConfig mapping;
  std::vector<etl::SourceRecordSet> sets;
  try {
    model = parse_model(read_file(model_path));
    mapping = etl::parse_mapping(read_file(mapping_path));
    for (const auto& s : sources) sets.push_back(read_source(s));
  } catch (const Error& e) {
    err << error_code_name(e.code()) << ": " << e.what() << '\n';
    return is_io_error(e.code()) ? kExitIo : kExitFailure;
  }
  std::map<std::string, std::string> documents;
  try {
    const auto records = etl::concat(sets);
    auto contents = etl::build_warehouse(records, mapping, model);
    const auto report = check_integrity(contents, HierarchyMode::Strict);
    if (!report.empty()) {
      for (const auto& d : report) err << to_string(d) << '\n';
      return kExitFailure;
    }
    documents = serialize_warehouse_documents(contents);
  } catch (const Error& e) {
    err << error_code_name(e.code()) << ": " << e.what() << '\n';
    return kExitFailure;
  }
  try {
    const fs::path root(out_dir);
    fs::create_directories(root);
    write_file(root / kModelFileName, serialize_model(model));
    for (const auto& [path, bytes] : documents) write_file(root / path, bytes);
  } catch (const std::exception& e) {
    err << "IO_ERROR: " << e.what() << '\n';
    return kExitIo;
  }
  out << "wrote " << documents.size() + 1 << " documents to " << out_dir << '\n';
  return kExitOk;
}

int cmd_query(const std::string& dir, const std::string& query_arg, const std::string& format, bool lenient,
              std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = text_or_file(query_arg);
  } catch (const Error& e) {
    err << error_code_name(e.code()) << ": " << e.what() << '\n';
    return kExitIo;
  }
  const auto store = load_for_reading(dir, lenient, err);
  if (!store) return kExitIo;
  try {
    out << render_table(evaluate(*store, parse_query(text)), format_of(format));
    return kExitOk;
  } catch (const Error& e) {
    err << error_code_name(e.code()) << ": " << e.what() << '\n';
    return kExitFailure;
  }
}

struct CubeOps {
  std::vector<std::string> roll_up;
  std::vector<std::string> drill_down;
  std::vector<std::string> dice;
  std::vector<std::string> slice;
};

int cmd_cube(const std::string& dir, const std::string& spec_arg, const CubeOps& ops, const std::string& format,
             bool lenient, std::ostream& out, std::ostream& err) {
  std::string spec_text;
  try {
    spec_text = text_or_file(spec_arg);
  } catch (const Error& e) {
    err << error_code_name(e.code()) << ": " << e.what() << '\n';
    return kExitIo;
  }
  const auto store = load_for_reading(dir, lenient, err);
  if (!store) return kExitIo;
  try {
    Cube cube = build_cube(*store, api::parse_cube_spec(spec_text));
    for (const auto& d : ops.roll_up) cube = roll_up(cube, d, *store);
    for (const auto& d : ops.drill_down) cube = drill_down(cube, d, *store);
    if (!ops.dice.empty()) {
      std::map<std::string, std::vector<std::string>> keep;
      for (const auto& arg : ops.dice) {
        auto [dim, members] = split_assignment(arg, "--dice");
        auto& kept = keep[dim];
        for (auto& m : split_list(members)) kept.push_back(std::move(m));
      }
      cube = dice(cube, keep);
    }
    for (const auto& arg : ops.slice) {
      const auto [dim, member] = split_assignment(arg, "--slice");
      cube = slice(cube, dim, member);
    }
    out << render_cube(cube, format_of(format));
    return kExitOk;
  } catch (const Error& e) {
    err << error_code_name(e.code()) << ": " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_serve(const std::string& dir, const std::string& bind, const std::string& assets, const std::string& log,
              bool lenient, std::ostream& out, std::ostream& err) {
  const auto colon = bind.rfind(':');
  int port = -1;
  if (colon != std::string::npos) {
    if (auto p = parse_int64(bind.substr(colon + 1)); p && *p >= 0 && *p <= 65535) port = static_cast<int>(*p);
  }
  if (port < 0) {
    err << "invalid --bind '" << bind << "', expected HOST:PORT\n";
    return kExitIo;
  }
  const std::string host = bind.substr(0, colon);
  const auto store = load_for_reading(dir, lenient, err);
  if (!store) return kExitIo;

  ServerOptions options;
  if (!assets.empty()) {
    if (!fs::is_directory(assets)) {
      err << "assets directory not found: " << assets << '\n';
      return kExitIo;
    }
    options.assets = assets;
  }
  if (!log.empty()) options.request_log = log;
  Server server(*store, options);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    err << "cannot bind " << bind << '\n';
    return kExitIo;
  }
  out << "serving " << dir << " on http://" << host << ':' << bound << '\n';
  out.flush();
  return server.listen() ? kExitOk : kExitIo;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"XML data warehouse engine", "xwacoda"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  const std::vector<std::string> formats{"text", "delimited"};

  std::string dir;
  bool lenient = false;
  std::string format = "text";

  auto* validate = app.add_subcommand("validate", "Load a warehouse and check its referential integrity");
  validate->add_option("dir", dir, "Warehouse directory or model document")->required();
  validate->add_flag("--lenient", lenient, "Accept members with several Roll-up parents");

  std::vector<std::string> sources;
  std::string mapping, model_path, out_dir;
  auto* ingest = app.add_subcommand("ingest", "Generate warehouse documents from source records");
  ingest->add_option("--sources", sources, "CSV, TSV or XML record files")->required();
  ingest->add_option("--mapping", mapping, "JSON mapping file")->required();
  ingest->add_option("--model", model_path, "Warehouse model document")->required();
  ingest->add_option("--out", out_dir, "Output directory")->required();

  std::string query_arg;
  auto* query = app.add_subcommand("query", "Evaluate an analytic query");
  query->add_option("dir", dir, "Warehouse directory or model document")->required();
  query->add_option("--query", query_arg, "Query text, or @file")->required();
  query->add_option("--format", format, "Output format")->check(CLI::IsMember(formats));
  query->add_flag("--lenient", lenient, "Accept members with several Roll-up parents");

  std::string spec_arg;
  CubeOps ops;
  auto* cube = app.add_subcommand("cube", "Build a cube and apply OLAP operators");
  cube->add_option("dir", dir, "Warehouse directory or model document")->required();
  cube->add_option("--spec", spec_arg, "Cube spec JSON, or @file")->required();
  cube->add_option("--roll-up", ops.roll_up, "Roll up an axis one level (repeatable)");
  cube->add_option("--drill-down", ops.drill_down, "Drill down an axis one level (repeatable)");
  cube->add_option("--dice", ops.dice, "Keep members DIM=m1,m2 (repeatable)");
  cube->add_option("--slice", ops.slice, "Fix an axis DIM=member (repeatable)");
  cube->add_option("--format", format, "Output format")->check(CLI::IsMember(formats));
  cube->add_flag("--lenient", lenient, "Accept members with several Roll-up parents");

  std::string bind = "127.0.0.1:8080", assets, log;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("dir", dir, "Warehouse directory or model document")->required();
  serve->add_option("--bind", bind, "HOST:PORT")->capture_default_str();
  serve->add_option("--assets", assets, "Directory of static explorer assets");
  serve->add_option("--log", log, "Append a request log to this file");
  serve->add_flag("--lenient", lenient, "Accept members with several Roll-up parents");

  std::vector<const char*> argv{"xwacoda"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitIo;
  }

  if (validate->parsed()) return cmd_validate(dir, lenient, out, err);
  if (ingest->parsed()) return cmd_ingest(sources, mapping, model_path, out_dir, out, err);
  if (query->parsed()) return cmd_query(dir, query_arg, format, lenient, out, err);
  if (cube->parsed()) return cmd_cube(dir, spec_arg, ops, format, lenient, out, err);
  return cmd_serve(dir, bind, assets, log, lenient, out, err);
}

}  // namespace xwacoda::cli
