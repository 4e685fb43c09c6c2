#include <algorithm>
#include <unordered_map>

#include "xwacoda/store.hpp"

namespace xwacoda {

namespace {

struct MemberRef {
  const DimensionMember* member;
  std::size_t level;
};

bool contains(const std::vector<std::string>& ids, const std::string& id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

class IntegrityChecker {
 public:
  IntegrityChecker(const WarehouseContents& c, HierarchyMode mode) : c_(c), mode_(mode) {}

  std::vector<Diagnostic> run() {
    index_.resize(c_.model.dimensions.size());
    for (std::size_t d = 0; d < c_.model.dimensions.size(); ++d) check_dimension(d);
    for (std::size_t f = 0; f < c_.model.fact_classes.size(); ++f) check_facts(f);
    return std::move(out_);
  }

 private:
  const WarehouseContents& c_;
  HierarchyMode mode_;
  std::vector<std::unordered_map<std::string, MemberRef>> index_;
  std::vector<Diagnostic> out_;

  void add(const char* code, std::string path, std::string message) {
    out_.push_back(Diagnostic{code, std::move(path), std::move(message)});
  }

  const std::vector<DimensionMember>& members_of(std::size_t d) const {
    static const std::vector<DimensionMember> kNone;
    return d < c_.members.size() ? c_.members[d] : kNone;
  }

  void check_dimension(std::size_t d) {
    const auto& def = c_.model.dimensions[d];
    auto& index = index_[d];
    for (const auto& m : members_of(d)) {
      auto level = def.level_index(m.level);
      if (!level) {
        add("UNKNOWN_LEVEL", def.id + "/" + m.id, "member declares unknown level '" + m.level + "'");
        continue;
      }
      if (!index.emplace(m.id, MemberRef{&m, *level}).second)
        add("DUPLICATE_MEMBER_ID", def.id + "/" + m.id, "member id '" + m.id + "' appears more than once");
    }

    const std::size_t top = def.levels.empty() ? 0 : def.levels.size() - 1;
    for (const auto& m : members_of(d)) {
      auto self = index.find(m.id);
      if (self == index.end() || self->second.member != &m) continue;
      const std::size_t level = self->second.level;
      const std::string path = def.id + "/" + m.id;

      for (const auto& parent_id : m.roll_up) {
        auto p = index.find(parent_id);
        if (p == index.end()) {
          add("DANGLING_ROLLUP", path, m.id + " rolls up to missing member '" + parent_id + "'");
        } else if (p->second.level != level + 1) {
          add("DANGLING_ROLLUP", path, m.id + " rolls up to '" + parent_id + "' which is not on the next coarser level");
        } else if (!contains(p->second.member->drill_down, m.id)) {
          add("ASYMMETRIC_HIERARCHY", path,
              "(" + m.id + ", " + parent_id + "): " + m.id + " rolls up to " + parent_id + " but " + parent_id +
                  " does not drill down to " + m.id);
        }
      }
      for (const auto& child_id : m.drill_down) {
        auto ch = index.find(child_id);
        if (ch == index.end()) {
          add("DANGLING_DRILLDOWN", path, m.id + " drills down to missing member '" + child_id + "'");
        } else if (level == 0 || ch->second.level != level - 1) {
          add("DANGLING_DRILLDOWN", path, m.id + " drills down to '" + child_id + "' which is not on the next finer level");
        } else if (!contains(ch->second.member->roll_up, m.id)) {
          add("ASYMMETRIC_HIERARCHY", def.id + "/" + child_id,
              "(" + child_id + ", " + m.id + "): " + m.id + " drills down to " + child_id + " but " + child_id +
                  " does not roll up to " + m.id);
        }
      }
      if (level < top) {
        if (mode_ == HierarchyMode::Strict && m.roll_up.size() != 1) {
          add("NONSTRICT_ROLLUP", path,
              m.id + " has " + std::to_string(m.roll_up.size()) + " Roll-up parents; strict hierarchies require exactly one");
        } else if (mode_ == HierarchyMode::Lenient && m.roll_up.empty()) {
          add("MISSING_ROLLUP", path, m.id + " is below the coarsest level but has no Roll-up parent");
        }
      }
    }
  }

  void check_facts(std::size_t f) {
    const auto& def = c_.model.fact_classes[f];
    if (f >= c_.facts.size()) return;
    const auto& records = c_.facts[f];
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& rec = records[i];
      const std::string label = rec.id.empty() ? "#" + std::to_string(i + 1) : rec.id;
      const std::string path = def.id + "/" + label;
      if (rec.dim_refs.size() != def.dimension_refs.size() || rec.measures.size() != def.measures.size()) {
        add("MALFORMED_FACT", path, "fact does not match the shape of its fact class");
        continue;
      }
      for (std::size_t r = 0; r < def.dimension_refs.size(); ++r) {
        const auto& dim_id = def.dimension_refs[r];
        const std::string ref_path = path + "/" + dim_id;
        auto d = c_.model.find_dimension(dim_id);
        if (!d) {
          add("DANGLING_FACT_REF", ref_path, "dimension '" + dim_id + "' is not declared");
          continue;
        }
        const auto& index = index_[static_cast<std::size_t>(d - c_.model.dimensions.data())];
        auto m = index.find(rec.dim_refs[r]);
        if (m == index.end()) {
          add("DANGLING_FACT_REF", ref_path, "no member '" + rec.dim_refs[r] + "' in dimension " + dim_id);
        } else if (m->second.level != 0) {
          add("DANGLING_FACT_REF", ref_path, "member '" + rec.dim_refs[r] + "' is not on the base level of " + dim_id);
        }
      }
    }
  }
};

}  // namespace

std::vector<Diagnostic> check_integrity(const WarehouseContents& contents, HierarchyMode mode) {
  return IntegrityChecker(contents, mode).run();
}

}  // namespace xwacoda
