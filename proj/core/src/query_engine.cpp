#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "xwacoda/query.hpp"

namespace xwacoda {

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::ValidationError, message); }

std::optional<Value> coerce(const Value& literal, ValueType target) {
  switch (target) {
    case ValueType::String:
      if (literal.index() == 0) return literal;
      return std::nullopt;
    case ValueType::Integer:
      if (literal.index() == 1) return literal;
      return std::nullopt;
    case ValueType::Decimal:
      if (literal.index() == 1) return Value{static_cast<double>(std::get<std::int64_t>(literal))};
      if (literal.index() == 2) return literal;
      return std::nullopt;
    case ValueType::Date:
      if (literal.index() == 3) return literal;
      if (literal.index() == 0) {
        if (auto d = parse_iso_date(std::get<std::string>(literal))) return Value{*d};
      }
      return std::nullopt;
  }
  return std::nullopt;
}

struct ResolvedPredicate {
  const DimensionDef* dim;
  std::size_t level;
  std::size_t attribute;
  Value literal;
};

ResolvedPredicate resolve(const WarehouseModel& model, const Predicate& p) {
  const auto* dim = model.find_dimension(p.dimension);
  if (!dim) invalid("unknown dimension '" + p.dimension + "'");
  auto level = dim->level_index(p.level);
  if (!level) invalid("dimension " + p.dimension + " has no level '" + p.level + "'");
  const auto& level_def = dim->levels[*level];
  auto attr = level_def.attribute_index(p.attribute);
  if (!attr) invalid("level " + p.dimension + "." + p.level + " has no attribute '" + p.attribute + "'");
  const auto type = level_def.attributes[*attr].value_type;
  auto literal = coerce(p.literal, type);
  if (!literal) {
    invalid("literal " + format_value(p.literal) + " does not match the " + std::string(to_string(type)) +
            " attribute " + p.dimension + "." + p.level + "." + p.attribute);
  }
  if (type == ValueType::String && p.comparator != Comparator::Eq && p.comparator != Comparator::Ne) {
    invalid("ordering comparison on string attribute " + p.dimension + "." + p.level + "." + p.attribute);
  }
  return {dim, *level, *attr, std::move(*literal)};
}

}  // namespace

AnalyticQuery validate_query(const WarehouseModel& model, const AnalyticQuery& query) {
  const auto* fc = model.find_fact_class(query.fact_class);
  if (!fc) invalid("unknown fact class '" + query.fact_class + "'");
  AnalyticQuery out = query;
  for (auto& p : out.predicates) {
    if (!fc->dimension_ref_index(p.dimension))
      invalid("fact class " + fc->id + " does not reference dimension '" + p.dimension + "'");
    p.literal = resolve(model, p).literal;
  }
  for (const auto& k : out.group_by) {
    if (!fc->dimension_ref_index(k.dimension))
      invalid("fact class " + fc->id + " does not reference dimension '" + k.dimension + "'");
    if (!model.find_dimension(k.dimension)->level_index(k.level))
      invalid("dimension " + k.dimension + " has no level '" + k.level + "'");
  }
  if (out.aggregates.empty()) invalid("query selects no aggregate");
  for (const auto& a : out.aggregates) {
    if (a.is_star()) {
      if (a.function != AggregateFunction::Count) invalid(a.label() + ": only count accepts '*'");
    } else if (!fc->find_measure(a.measure)) {
      invalid("fact class " + fc->id + " has no measure '" + a.measure + "'");
    }
  }
  return out;
}

std::string format_cell(const Cell& cell) {
  switch (cell.index()) {
    case 0: return "";
    case 1: return std::get<std::string>(cell);
    case 2: return std::to_string(std::get<std::int64_t>(cell));
    default: return format_double(std::get<double>(cell));
  }
}

std::vector<MemberIndex> resolve_selection(const WarehouseStore& store, const Predicate& p) {
  const auto r = resolve(store.model(), p);
  const auto& dim = store.dimension(p.dimension);

  std::vector<std::uint8_t> matches(dim.members().size(), 0);
  std::vector<MemberIndex> frontier;
  if (p.comparator == Comparator::Eq) {
    for (MemberIndex m : dim.lookup(r.level, r.attribute, r.literal)) {
      matches[m] = 1;
      frontier.push_back(m);
    }
  } else {
    for (MemberIndex m : dim.level_members(r.level)) {
      const auto& v = dim.member(m).attributes[r.attribute];
      if (v && compare_values(*v, p.comparator, r.literal)) {
        matches[m] = 1;
        frontier.push_back(m);
      }
    }
  }

  // Descend the Drill-Down closure to the base level.
  std::vector<std::uint8_t> visited(dim.members().size(), 0);
  for (std::size_t level = r.level; level > 0; --level) {
    std::vector<MemberIndex> below;
    for (MemberIndex m : frontier) {
      for (MemberIndex c : dim.children(m)) {
        if (!visited[c]) {
          visited[c] = 1;
          below.push_back(c);
        }
      }
    }
    frontier = std::move(below);
  }

  if (r.level > 0 && store.mode() == HierarchyMode::Lenient) {
    for (MemberIndex b : frontier) {
      std::vector<MemberIndex> ancestors{b};
      for (std::size_t level = 0; level < r.level; ++level) {
        std::vector<MemberIndex> up;
        for (MemberIndex a : ancestors)
          for (MemberIndex parent : dim.parents(a)) up.push_back(parent);
        ancestors = std::move(up);
      }
      for (MemberIndex a : ancestors) {
        if (!matches[a]) {
          throw Error(ErrorCode::NonStrictHierarchy,
                      "member " + dim.member(b).id + " has ancestors at level " + p.level +
                          " that disagree on the selection");
        }
      }
    }
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

namespace {

constexpr MemberIndex kAmbiguous = std::numeric_limits<MemberIndex>::max();

/// Maps every member of the base level to its ancestor at `level`.
std::vector<MemberIndex> ancestor_map(const DimensionTable& dim, std::size_t level) {
  std::vector<MemberIndex> out(dim.members().size(), kAmbiguous);
  for (MemberIndex b : dim.level_members(0)) {
    MemberIndex cur = b;
    for (std::size_t l = 0; l < level && cur != kAmbiguous; ++l) {
      const auto parents = dim.parents(cur);
      cur = parents.size() == 1 ? parents[0] : kAmbiguous;
    }
    out[b] = cur;
  }
  return out;
}

struct KeyHash {
  std::size_t operator()(const std::vector<MemberIndex>& key) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (MemberIndex m : key) h = (h ^ m) * 0x100000001b3ULL;
    return h;
  }
};

struct Accumulator {
  double sum = 0;
  std::int64_t isum = 0;
  std::int64_t n = 0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
};

struct Group {
  std::vector<MemberIndex> key;
  std::int64_t facts = 0;
  std::vector<Accumulator> acc;
};

ColumnType column_type(ValueType t) {
  switch (t) {
    case ValueType::String: return ColumnType::String;
    case ValueType::Integer: return ColumnType::Integer;
    case ValueType::Decimal: return ColumnType::Decimal;
    case ValueType::Date: return ColumnType::Date;
  }
  return ColumnType::String;
}

Cell attribute_cell(const std::optional<Value>& v) {
  if (!v) return std::monostate{};
  switch (v->index()) {
    case 0: return std::get<std::string>(*v);
    case 1: return std::get<std::int64_t>(*v);
    case 2: return std::get<double>(*v);
    default: return format_value(*v);
  }
}

}  // namespace

ResultTable evaluate(const WarehouseStore& store, const AnalyticQuery& query) {
  return evaluate(store, query, {});
}

ResultTable evaluate(const WarehouseStore& store, const AnalyticQuery& raw_query,
                     std::span<const MemberFilter> member_filters) {
  const AnalyticQuery q = validate_query(store.model(), raw_query);
  const FactTable& facts = store.facts(q.fact_class);
  const FactClassDef& fc = facts.def();

  // (1) selection sets per referenced dimension slot.
  std::vector<std::vector<std::uint8_t>> masks(fc.dimension_refs.size());
  for (const auto& p : q.predicates) {
    const std::size_t slot = *fc.dimension_ref_index(p.dimension);
    const auto& dim = store.dimension(p.dimension);
    std::vector<std::uint8_t> sel(dim.members().size(), 0);
    for (MemberIndex m : resolve_selection(store, p)) sel[m] = 1;
    if (masks[slot].empty()) {
      masks[slot] = std::move(sel);
    } else {
      for (std::size_t i = 0; i < sel.size(); ++i) masks[slot][i] &= sel[i];
    }
  }
  for (const auto& f : member_filters) {
    auto slot = fc.dimension_ref_index(f.dimension);
    if (!slot) invalid("fact class " + fc.id + " does not reference dimension '" + f.dimension + "'");
    const auto& dim = store.dimension(f.dimension);
    auto level = dim.def().level_index(f.level);
    if (!level) invalid("dimension " + f.dimension + " has no level '" + f.level + "'");
    std::vector<std::uint8_t> wanted(dim.members().size(), 0);
    for (const auto& id : f.members) {
      if (auto m = dim.find(id); m && dim.level_of(*m) == *level) wanted[*m] = 1;
    }
    const auto ancestor = ancestor_map(dim, *level);
    std::vector<std::uint8_t> sel(dim.members().size(), 0);
    for (MemberIndex b : dim.level_members(0)) {
      if (ancestor[b] == kAmbiguous) {
        throw Error(ErrorCode::NonStrictHierarchy,
                    "member " + dim.member(b).id + " has no single ancestor at level " + f.level);
      }
      sel[b] = wanted[ancestor[b]];
    }
    if (masks[*slot].empty()) {
      masks[*slot] = std::move(sel);
    } else {
      for (std::size_t i = 0; i < sel.size(); ++i) masks[*slot][i] &= sel[i];
    }
  }
  std::vector<std::pair<std::span<const MemberIndex>, const std::vector<std::uint8_t>*>> filters;
  for (std::size_t slot = 0; slot < masks.size(); ++slot)
    if (!masks[slot].empty()) filters.emplace_back(facts.refs(slot), &masks[slot]);

  // (2) group-key ancestor maps.
  struct KeyColumn {
    std::span<const MemberIndex> refs;
    std::vector<MemberIndex> ancestor;
    const DimensionTable* dim;
    std::size_t level;
  };
  std::vector<KeyColumn> keys;
  for (const auto& k : q.group_by) {
    const auto& dim = store.dimension(k.dimension);
    const std::size_t level = *dim.def().level_index(k.level);
    keys.push_back({facts.refs(*fc.dimension_ref_index(k.dimension)), ancestor_map(dim, level), &dim, level});
  }

  struct MeasureColumn {
    std::span<const double> values;
    std::span<const std::uint8_t> present;
  };
  std::vector<std::optional<MeasureColumn>> measures;
  for (const auto& a : q.aggregates) {
    if (a.is_star()) {
      measures.emplace_back(std::nullopt);
    } else {
      const auto m = *fc.measure_index(a.measure);
      measures.emplace_back(MeasureColumn{facts.measure_values(m), facts.measure_present(m)});
    }
  }

  // (3) single scan with hash grouping.
  std::vector<Group> groups;
  std::unordered_map<std::vector<MemberIndex>, std::size_t, KeyHash> group_of;
  std::vector<MemberIndex> key(keys.size());
  const std::size_t n = facts.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool keep = true;
    for (const auto& [refs, mask] : filters) {
      if (!(*mask)[refs[i]]) {
        keep = false;
        break;
      }
    }
    if (!keep) continue;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      key[k] = keys[k].ancestor[keys[k].refs[i]];
      if (key[k] == kAmbiguous) {
        throw Error(ErrorCode::NonStrictHierarchy,
                    "member " + keys[k].dim->member(keys[k].refs[i]).id + " has no single ancestor at level " +
                        keys[k].dim->def().levels[keys[k].level].id);
      }
    }
    auto [it, inserted] = group_of.try_emplace(key, groups.size());
    if (inserted) groups.push_back(Group{key, 0, std::vector<Accumulator>(q.aggregates.size())});
    Group& g = groups[it->second];
    ++g.facts;
    for (std::size_t a = 0; a < measures.size(); ++a) {
      if (!measures[a] || !measures[a]->present[i]) continue;
      const double v = measures[a]->values[i];
      auto& acc = g.acc[a];
      acc.sum += v;
      acc.isum += static_cast<std::int64_t>(v);
      ++acc.n;
      acc.min = std::min(acc.min, v);
      acc.max = std::max(acc.max, v);
    }
  }

  // (4) shape the result.
  ResultTable table;
  for (const auto& kc : keys) {
    const auto& level = kc.dim->def().levels[kc.level];
    const std::string prefix = kc.dim->id() + "." + level.id;
    table.columns.push_back({prefix, ColumnRole::GroupMember, ColumnType::String});
    for (const auto& attr : level.attributes)
      table.columns.push_back({prefix + "." + attr.id, ColumnRole::GroupAttribute, column_type(attr.value_type)});
  }
  for (const auto& a : q.aggregates) {
    ColumnType type = ColumnType::Integer;
    if (a.function == AggregateFunction::Avg) {
      type = ColumnType::Decimal;
    } else if (a.function != AggregateFunction::Count) {
      type = column_type(fc.find_measure(a.measure)->value_type);
    }
    table.columns.push_back({a.label(), ColumnRole::Aggregate, type});
  }

  if (keys.empty() && groups.empty()) {
    const bool only_counts = std::all_of(q.aggregates.begin(), q.aggregates.end(),
                                         [](const auto& a) { return a.function == AggregateFunction::Count; });
    if (only_counts) groups.push_back(Group{{}, 0, std::vector<Accumulator>(q.aggregates.size())});
  }

  std::sort(groups.begin(), groups.end(), [&](const Group& x, const Group& y) {
    for (std::size_t k = 0; k < keys.size(); ++k) {
      const auto& a = keys[k].dim->member(x.key[k]).id;
      const auto& b = keys[k].dim->member(y.key[k]).id;
      if (a != b) return a < b;
    }
    return false;
  });

  table.rows.reserve(groups.size());
  for (const auto& g : groups) {
    std::vector<Cell> row;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      const auto& member = keys[k].dim->member(g.key[k]);
      row.emplace_back(member.id);
      for (const auto& v : member.attributes) row.push_back(attribute_cell(v));
    }
    for (std::size_t a = 0; a < q.aggregates.size(); ++a) {
      const auto& spec = q.aggregates[a];
      const auto& acc = g.acc[a];
      const bool integer = !spec.is_star() && fc.find_measure(spec.measure)->value_type == ValueType::Integer;
      switch (spec.function) {
        case AggregateFunction::Count:
          row.emplace_back(spec.is_star() ? g.facts : acc.n);
          break;
        case AggregateFunction::Sum:
          if (acc.n == 0) row.emplace_back(std::monostate{});
          else if (integer) row.emplace_back(acc.isum);
          else row.emplace_back(acc.sum);
          break;
        case AggregateFunction::Avg:
          if (acc.n == 0) row.emplace_back(std::monostate{});
          else row.emplace_back(acc.sum / static_cast<double>(acc.n));
          break;
        case AggregateFunction::Min:
        case AggregateFunction::Max: {
          const double v = spec.function == AggregateFunction::Min ? acc.min : acc.max;
          if (acc.n == 0) row.emplace_back(std::monostate{});
          else if (integer) row.emplace_back(static_cast<std::int64_t>(v));
          else row.emplace_back(v);
          break;
        }
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace xwacoda
