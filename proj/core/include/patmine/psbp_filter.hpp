#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "patmine/pattern_store.hpp"

namespace patmine {

// Project-specific bug pattern: a change pattern with at least one
// bug-fix instance, at least two instances, and a before-text no other
// pattern shares.
struct Psbp {
  PatternId pattern_id = 0;
  std::vector<std::string> bugfix_commit_ids;  // sorted, non-empty

  friend bool operator==(const Psbp&, const Psbp&) = default;
};

// Ids of commits flagged is_bugfix in the store.
[[nodiscard]] std::set<std::string> bugfix_commit_ids(const PatternStore& store);

// Patterns with at least one delta from a bug-fix commit, in id order.
[[nodiscard]] std::vector<PatternId> filter_condition_1(const PatternStore& store,
                                                        const std::set<std::string>& bugfix_commits);

// Keeps candidates with support >= 2 whose before_key occurs in exactly one
// pattern of the whole store. Addition patterns never qualify.
[[nodiscard]] std::vector<PatternId> filter_condition_2(const PatternStore& store,
                                                        std::span<const PatternId> candidates);

[[nodiscard]] std::vector<Psbp> extract_psbps(const PatternStore& store,
                                              const std::set<std::string>& bugfix_commits);

// Uses the is_bugfix flags recorded in the store.
[[nodiscard]] std::vector<Psbp> extract_psbps(const PatternStore& store);

}  // namespace patmine
