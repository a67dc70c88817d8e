#include "patmine/psbp_filter.hpp"

#include <algorithm>
#include <unordered_map>

namespace patmine {

std::set<std::string> bugfix_commit_ids(const PatternStore& store) {
  std::set<std::string> ids;
  for (const auto& c : store.commits()) {
    if (c.is_bugfix) ids.insert(c.id);
  }
  return ids;
}

std::vector<PatternId> filter_condition_1(const PatternStore& store,
                                          const std::set<std::string>& bugfix_commits) {
  std::vector<PatternId> kept;
  for (const auto& p : store.patterns()) {
    bool from_fix = std::any_of(p.delta_ids.begin(), p.delta_ids.end(), [&](DeltaId id) {
      return bugfix_commits.contains(store.delta(id).commit_id);
    });
    if (from_fix) kept.push_back(p.id);
  }
  return kept;
}

std::vector<PatternId> filter_condition_2(const PatternStore& store,
                                          std::span<const PatternId> candidates) {
  std::unordered_map<std::string, int> before_count;
  for (const auto& p : store.patterns()) ++before_count[p.before_key];

  std::vector<PatternId> kept;
  for (auto id : candidates) {
    const auto& p = store.pattern(id);
    if (p.is_addition()) continue;
    if (p.metrics.support < 2) continue;
    if (before_count[p.before_key] != 1) continue;
    kept.push_back(id);
  }
  return kept;
}

std::vector<Psbp> extract_psbps(const PatternStore& store,
                                const std::set<std::string>& bugfix_commits) {
  auto candidates = filter_condition_1(store, bugfix_commits);
  auto survivors = filter_condition_2(store, candidates);
  std::sort(survivors.begin(), survivors.end());

  std::vector<Psbp> out;
  out.reserve(survivors.size());
  for (auto id : survivors) {
    std::set<std::string> fixes;
    for (auto delta_id : store.pattern(id).delta_ids) {
      const auto& commit = store.delta(delta_id).commit_id;
      if (bugfix_commits.contains(commit)) fixes.insert(commit);
    }
    out.push_back({id, {fixes.begin(), fixes.end()}});
  }
  return out;
}

std::vector<Psbp> extract_psbps(const PatternStore& store) {
  return extract_psbps(store, bugfix_commit_ids(store));
}

}  // namespace patmine
