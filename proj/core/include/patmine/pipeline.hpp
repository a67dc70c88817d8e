#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "patmine/differ.hpp"
#include "patmine/normalizer.hpp"
#include "patmine/pattern_store.hpp"
#include "patmine/repo_ingest.hpp"

namespace patmine {

struct MineConfig {
  std::filesystem::path repo;
  std::string branch = "HEAD";
  std::optional<std::int64_t> since;
  std::optional<std::filesystem::path> issue_file;
  std::optional<std::string> issue_regex;
  SourceFilter sources;
  AbstractionOptions abstraction;
  unsigned threads = 0;

  // Exactly one of issue_file and issue_regex must be set.
  [[nodiscard]] IssueMatcher issue_matcher() const;
};

struct MineSummary {
  std::size_t commits = 0;
  std::size_t bugfix_commits = 0;
  std::size_t file_changes = 0;
  std::size_t deltas = 0;
  std::size_t patterns = 0;
  std::size_t patterns_condition_1 = 0;  // patterns with a bug-fix instance
  std::size_t psbps = 0;                 // ... that also pass condition 2
  Diagnostics warnings;
};

struct MineResult {
  PatternStore store;
  MineSummary summary;
};

// Abstracts both sides of every changed source file and diffs them.
[[nodiscard]] std::vector<CodeDelta> commit_deltas(std::span<const FileChange> changes,
                                                   const CommitRecord& commit,
                                                   const AbstractionOptions& options = {},
                                                   Diagnostics* diagnostics = nullptr);

// Walks the history, extracts deltas from commits in parallel, then
// groups them in history order on the calling thread.
[[nodiscard]] MineResult mine(const MineConfig& config);

}  // namespace patmine
