#include "patmine/matcher.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <mutex>
#include <tuple>
#include <unordered_map>

#include "parallel.hpp"
#include "patmine/error.hpp"

namespace patmine {

namespace {

struct Needle {
  PatternId id;
  std::vector<Digest> digests;
  const std::vector<std::string>* after_text;
};

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

}  // namespace

std::vector<Digest> digests_of_key(const std::string& key) {
  if (key.size() % 32 != 0) throw IntegrityError("malformed digest key");
  std::vector<Digest> out;
  out.reserve(key.size() / 32);
  for (std::size_t i = 0; i < key.size(); i += 32) {
    auto d = Digest::from_hex(std::string_view(key).substr(i, 32));
    if (!d) throw IntegrityError("malformed digest key");
    out.push_back(*d);
  }
  return out;
}

std::vector<MatchResult> match_revision(PatternStore& store, std::span<const Psbp> psbps,
                                        std::span<const NormalizedFile> files, unsigned threads) {
  std::vector<Needle> needles;
  std::unordered_map<Digest, std::vector<std::size_t>, DigestHash> by_first;
  for (const auto& psbp : psbps) {
    const auto& p = store.pattern(psbp.pattern_id);
    auto digests = digests_of_key(p.before_key);
    if (digests.empty()) continue;
    by_first[digests.front()].push_back(needles.size());
    needles.push_back({p.id, std::move(digests), &p.after_text});
  }

  std::vector<std::vector<MatchResult>> per_file(files.size());
  detail::parallel_for(files.size(), threads, [&](std::size_t f) {
    const auto& file = files[f];
    const auto& stmts = file.statements;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      auto it = by_first.find(stmts[i].digest);
      if (it == by_first.end()) continue;
      for (auto n : it->second) {
        const auto& needle = needles[n];
        auto len = needle.digests.size();
        if (i + len > stmts.size()) continue;
        bool equal = true;
        for (std::size_t k = 1; k < len && equal; ++k) {
          equal = stmts[i + k].digest == needle.digests[k];
        }
        if (!equal) continue;
        per_file[f].push_back({needle.id, file.path, i, i + len,
                               {stmts[i].line_span.first, stmts[i + len - 1].line_span.last},
                               *needle.after_text});
      }
    }
  });

  std::vector<MatchResult> results;
  for (auto& r : per_file) std::move(r.begin(), r.end(), std::back_inserter(results));
  std::sort(results.begin(), results.end(), [](const MatchResult& a, const MatchResult& b) {
    return std::tie(a.path, a.statement_begin, a.psbp_id) <
           std::tie(b.path, b.statement_begin, b.psbp_id);
  });

  std::unordered_map<PatternId, std::int64_t> counts;
  for (const auto& r : results) ++counts[r.psbp_id];
  for (const auto& psbp : psbps) {
    store.set_matched(psbp.pattern_id, counts[psbp.pattern_id]);
  }
  return results;
}

bool contains_text(std::string_view haystack, std::string_view needle, bool ignore_case) {
  if (!ignore_case) return haystack.find(needle) != std::string_view::npos;
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                        [](char a, char b) { return lower(a) == lower(b); });
  return it != haystack.end() || needle.empty();
}

bool keeps_pattern(const PatternStore& store, PatternId id, const TriageFilter& filter) {
  const auto& p = store.pattern(id);
  if (filter.max_matches && p.metrics.matched > *filter.max_matches) return false;
  if (filter.log_keyword) {
    bool found = std::any_of(p.delta_ids.begin(), p.delta_ids.end(), [&](DeltaId d) {
      const auto* c = store.find_commit(store.delta(d).commit_id);
      return c && contains_text(c->log_message, *filter.log_keyword, filter.ignore_case);
    });
    if (!found) return false;
  }
  return true;
}

bool keeps_path(std::string_view path, const TriageFilter& filter) {
  if (filter.path_keyword && !contains_text(path, *filter.path_keyword, filter.ignore_case)) {
    return false;
  }
  if (filter.exclude_path && contains_text(path, *filter.exclude_path, filter.ignore_case)) {
    return false;
  }
  return true;
}

std::vector<MatchResult> apply_filters(std::span<const MatchResult> results,
                                       const PatternStore& store, const TriageFilter& filter) {
  std::unordered_map<PatternId, bool> pattern_ok;
  std::vector<MatchResult> kept;
  for (const auto& r : results) {
    auto [it, fresh] = pattern_ok.try_emplace(r.psbp_id, false);
    if (fresh) it->second = keeps_pattern(store, r.psbp_id, filter);
    if (it->second && keeps_path(r.path, filter)) kept.push_back(r);
  }
  return kept;
}

std::vector<NormalizedFile> load_revision(const std::filesystem::path& root,
                                          const SourceFilter& sources,
                                          const AbstractionOptions& options,
                                          Diagnostics* diagnostics, unsigned threads) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw ConfigError("revision path is not a directory: " + root.string());
  }
  std::vector<std::string> paths;
  for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied);
       it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_directory() && it->path().filename() == ".git") {
      it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file()) continue;
    auto rel = fs::relative(it->path(), root).generic_string();
    if (sources.accepts(rel)) paths.push_back(std::move(rel));
  }
  std::sort(paths.begin(), paths.end());

  std::vector<NormalizedFile> files(paths.size());
  std::vector<Diagnostics> notes(paths.size());
  std::vector<char> keep(paths.size(), 1);
  detail::parallel_for(paths.size(), threads, [&](std::size_t i) {
    std::ifstream in(root / paths[i], std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!in.good() && !in.eof()) {
      notes[i].push_back("cannot read " + paths[i]);
      keep[i] = 0;
      return;
    }
    if (!is_text_blob(text)) {
      notes[i].push_back("skipping undecodable file " + paths[i]);
      keep[i] = 0;
      return;
    }
    Diagnostics lex;
    files[i] = abstract_file(text, paths[i], options, &lex);
    for (auto& d : lex) notes[i].push_back(paths[i] + ": " + d);
  });

  std::vector<NormalizedFile> out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (diagnostics) {
      for (auto& d : notes[i]) diagnostics->push_back(std::move(d));
    }
    if (keep[i]) out.push_back(std::move(files[i]));
  }
  return out;
}

}  // namespace patmine
