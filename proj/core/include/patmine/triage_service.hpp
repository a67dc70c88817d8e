#pragma once

#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "patmine/matcher.hpp"
#include "patmine/pattern_store.hpp"
#include "patmine/psbp_filter.hpp"

namespace patmine {

[[nodiscard]] nlohmann::json to_json(const MatchResult& result);
[[nodiscard]] nlohmann::json to_json(const PatternMetrics& metrics);

// Reads log_kw, max_matches, path_kw, exclude_path and ignore_case.
// Throws ConfigError on a malformed max_matches.
[[nodiscard]] TriageFilter filter_from_query(const std::map<std::string, std::string>& query);

// Read-only triage view over a mined store matched against one revision.
// Backs the HTTP API; every method is safe to call concurrently.
class TriageService {
 public:
  TriageService(PatternStore store, std::filesystem::path revision_root,
                const SourceFilter& sources = {}, unsigned threads = 0);

  // [{path, matches}] for every source file kept by the path filter.
  [[nodiscard]] nlohmann::json files(const TriageFilter& filter) const;

  // PSBPs with metrics and their (filtered) match locations. With `file`,
  // only PSBPs matched in that file.
  [[nodiscard]] nlohmann::json patterns(const std::optional<std::string>& file,
                                        const TriageFilter& filter) const;

  // Past deltas of a pattern with commit ids and logs; nullopt if unknown.
  [[nodiscard]] std::optional<nlohmann::json> changes(PatternId id) const;

  // File text for a path of the revision; nullopt for anything else.
  [[nodiscard]] std::optional<nlohmann::json> source(const std::string& path) const;

  [[nodiscard]] const PatternStore& store() const noexcept { return store_; }
  [[nodiscard]] const std::vector<Psbp>& psbps() const noexcept { return psbps_; }
  [[nodiscard]] const std::vector<MatchResult>& results() const noexcept { return results_; }

 private:
  PatternStore store_;
  std::filesystem::path root_;
  std::vector<Psbp> psbps_;
  std::vector<NormalizedFile> files_;
  std::vector<MatchResult> results_;
};

}  // namespace patmine
