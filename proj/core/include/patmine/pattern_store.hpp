#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "patmine/differ.hpp"
#include "patmine/repo_ingest.hpp"

namespace patmine {

using PatternId = std::int64_t;
using DeltaId = std::int64_t;  // 1-based position in PatternStore::deltas()

struct PatternMetrics {
  std::int64_t size = 0;     // statements in the before-text
  std::int64_t files = 0;    // distinct paths
  std::int64_t commits = 0;  // distinct commits
  std::int64_t authors = 0;  // distinct commit authors
  std::int64_t support = 0;  // number of deltas
  std::int64_t matched = -1; // occurrences in the target revision, -1 until matched

  friend bool operator==(const PatternMetrics&, const PatternMetrics&) = default;
};

struct ChangePattern {
  PatternId id = 0;
  std::string before_key;
  std::string after_key;
  std::vector<std::string> before_text;  // one normalized line per statement
  std::vector<std::string> after_text;
  std::vector<DeltaId> delta_ids;
  PatternMetrics metrics;

  [[nodiscard]] bool is_addition() const noexcept { return before_key.empty(); }

  friend bool operator==(const ChangePattern&, const ChangePattern&) = default;
};

// Partitions deltas by (before_key, after_key). Pattern ids follow the
// order of first occurrence; delta ids are 1-based input positions.
// Metrics other than size and support are left at zero; see
// compute_metrics. Throws IntegrityError when two deltas share a key but
// their normalized texts differ.
[[nodiscard]] std::vector<ChangePattern> group_deltas(std::span<const CodeDelta> deltas);

class PatternStore;

[[nodiscard]] PatternMetrics compute_metrics(const ChangePattern& pattern,
                                             const PatternStore& store);

class PatternStore {
 public:
  PatternStore() = default;

  // Validates the cross references (see check_integrity) and throws
  // IntegrityError on failure.
  PatternStore(std::vector<CommitRecord> commits, std::vector<CodeDelta> deltas,
               std::vector<ChangePattern> patterns);

  // Groups the deltas and fills in all metrics except matched.
  [[nodiscard]] static PatternStore build(std::vector<CommitRecord> commits,
                                          std::vector<CodeDelta> deltas);

  [[nodiscard]] const std::vector<CommitRecord>& commits() const noexcept { return commits_; }
  [[nodiscard]] const std::vector<CodeDelta>& deltas() const noexcept { return deltas_; }
  [[nodiscard]] const std::vector<ChangePattern>& patterns() const noexcept { return patterns_; }

  [[nodiscard]] const CommitRecord* find_commit(const std::string& id) const;
  [[nodiscard]] const CodeDelta& delta(DeltaId id) const;
  [[nodiscard]] const ChangePattern& pattern(PatternId id) const;
  [[nodiscard]] const ChangePattern* find_pattern(PatternId id) const;

  void set_matched(PatternId id, std::int64_t matched);

  void check_integrity() const;

  friend bool operator==(const PatternStore& a, const PatternStore& b) {
    return a.commits_ == b.commits_ && a.deltas_ == b.deltas_ && a.patterns_ == b.patterns_;
  }

 private:
  void index();

  std::vector<CommitRecord> commits_;
  std::vector<CodeDelta> deltas_;
  std::vector<ChangePattern> patterns_;
  std::unordered_map<std::string, std::size_t> commit_index_;
  std::unordered_map<PatternId, std::size_t> pattern_index_;
};

// Canonical JSON Lines: commits, then deltas, then patterns, one object
// per line with sorted keys. An empty store produces no output.
void export_jsonl(const PatternStore& store, std::ostream& out);
// Throws FormatError naming the offending line.
[[nodiscard]] PatternStore import_jsonl(std::istream& in);

// Single-file SQLite database. save() replaces any existing file.
void save_sqlite(const PatternStore& store, const std::filesystem::path& db);
// Throws ConfigError when the file is missing or not a pattern database.
[[nodiscard]] PatternStore load_sqlite(const std::filesystem::path& db);

}  // namespace patmine
