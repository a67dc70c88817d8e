#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patmine/normalizer.hpp"
#include "patmine/pattern_store.hpp"
#include "patmine/psbp_filter.hpp"
#include "patmine/repo_ingest.hpp"

namespace patmine {

// One code fragment in the target revision whose statement digests equal
// a PSBP's before-text.
struct MatchResult {
  PatternId psbp_id = 0;
  std::string path;
  std::size_t statement_begin = 0;  // half-open index range into the file
  std::size_t statement_end = 0;
  LineSpan line_span;
  std::vector<std::string> suggested_after_text;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

struct TriageFilter {
  std::optional<std::string> log_keyword;    // some commit log of the pattern contains it
  std::optional<std::int64_t> max_matches;   // MATCHED <= max_matches
  std::optional<std::string> path_keyword;   // result path contains it
  std::optional<std::string> exclude_path;   // result path does not contain it
  bool ignore_case = false;                  // for the three keyword tests
};

// Digest sequence encoded in a before/after key.
[[nodiscard]] std::vector<Digest> digests_of_key(const std::string& key);

// Reports every occurrence, overlapping ones included, of each PSBP's
// before-text in every file, and records the per-PSBP count as MATCHED in
// the store (0 when absent). Results are ordered by (path, statement,
// psbp id). Files are scanned on up to `threads` workers (0 = hardware).
[[nodiscard]] std::vector<MatchResult> match_revision(PatternStore& store,
                                                      std::span<const Psbp> psbps,
                                                      std::span<const NormalizedFile> files,
                                                      unsigned threads = 0);

[[nodiscard]] bool contains_text(std::string_view haystack, std::string_view needle,
                                 bool ignore_case);

// Pattern-level part of the filter (log keyword and match count).
[[nodiscard]] bool keeps_pattern(const PatternStore& store, PatternId id,
                                 const TriageFilter& filter);
// Path-level part of the filter (include and exclude keywords).
[[nodiscard]] bool keeps_path(std::string_view path, const TriageFilter& filter);

[[nodiscard]] std::vector<MatchResult> apply_filters(std::span<const MatchResult> results,
                                                     const PatternStore& store,
                                                     const TriageFilter& filter);

// Abstracts every source file below `root` (skipping .git), sorted by
// repository-relative path with '/' separators.
[[nodiscard]] std::vector<NormalizedFile> load_revision(const std::filesystem::path& root,
                                                        const SourceFilter& sources = {},
                                                        const AbstractionOptions& options = {},
                                                        Diagnostics* diagnostics = nullptr,
                                                        unsigned threads = 0);

}  // namespace patmine
