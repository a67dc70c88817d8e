#include "patmine/triage_service.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <set>

#include "patmine/error.hpp"

namespace patmine {

using nlohmann::json;

json to_json(const MatchResult& r) {
  return {{"psbp_id", r.psbp_id},
          {"path", r.path},
          {"statement_begin", r.statement_begin},
          {"statement_end", r.statement_end},
          {"first_line", r.line_span.first},
          {"last_line", r.line_span.last},
          {"suggested_after_text", r.suggested_after_text}};
}

json to_json(const PatternMetrics& m) {
  return {{"size", m.size},       {"files", m.files},     {"commits", m.commits},
          {"authors", m.authors}, {"support", m.support}, {"matched", m.matched}};
}

TriageFilter filter_from_query(const std::map<std::string, std::string>& query) {
  TriageFilter f;
  auto get = [&](const char* key) -> std::optional<std::string> {
    auto it = query.find(key);
    if (it == query.end() || it->second.empty()) return std::nullopt;
    return it->second;
  };
  f.log_keyword = get("log_kw");
  f.path_keyword = get("path_kw");
  f.exclude_path = get("exclude_path");
  if (auto v = get("ignore_case")) f.ignore_case = (*v == "1" || *v == "true");
  if (auto v = get("max_matches")) {
    std::int64_t n = 0;
    auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), n);
    if (ec != std::errc{} || p != v->data() + v->size() || n < 1) {
      throw ConfigError("max_matches must be a positive integer");
    }
    f.max_matches = n;
  }
  return f;
}

TriageService::TriageService(PatternStore store, std::filesystem::path revision_root,
                             const SourceFilter& sources, unsigned threads)
    : store_(std::move(store)), root_(std::move(revision_root)) {
  psbps_ = extract_psbps(store_);
  files_ = load_revision(root_, sources, {}, nullptr, threads);
  results_ = match_revision(store_, psbps_, files_, threads);
}

json TriageService::files(const TriageFilter& filter) const {
  auto kept = apply_filters(results_, store_, filter);
  std::map<std::string, std::int64_t> counts;
  for (const auto& r : kept) ++counts[r.path];
  json out = json::array();
  for (const auto& f : files_) {
    if (!keeps_path(f.path, filter)) continue;
    auto it = counts.find(f.path);
    out.push_back({{"path", f.path}, {"matches", it == counts.end() ? 0 : it->second}});
  }
  return out;
}

json TriageService::patterns(const std::optional<std::string>& file,
                             const TriageFilter& filter) const {
  auto kept = apply_filters(results_, store_, filter);
  json out = json::array();
  for (const auto& psbp : psbps_) {
    if (!keeps_pattern(store_, psbp.pattern_id, filter)) continue;
    json matches = json::array();
    for (const auto& r : kept) {
      if (r.psbp_id != psbp.pattern_id) continue;
      if (file && r.path != *file) continue;
      matches.push_back(to_json(r));
    }
    if (file && matches.empty()) continue;
    const auto& p = store_.pattern(psbp.pattern_id);
    out.push_back({{"id", p.id},
                   {"before_text", p.before_text},
                   {"after_text", p.after_text},
                   {"metrics", to_json(p.metrics)},
                   {"bugfix_commits", psbp.bugfix_commit_ids},
                   {"matches", std::move(matches)}});
  }
  return out;
}

std::optional<json> TriageService::changes(PatternId id) const {
  const auto* p = store_.find_pattern(id);
  if (!p) return std::nullopt;
  json list = json::array();
  for (auto delta_id : p->delta_ids) {
    const auto& d = store_.delta(delta_id);
    const auto* c = store_.find_commit(d.commit_id);
    json before = json::array(), after = json::array();
    for (const auto& s : d.before) before.push_back(s.normalized_text);
    for (const auto& s : d.after) after.push_back(s.normalized_text);
    auto span = [](const std::optional<LineSpan>& s) -> json {
      if (!s) return nullptr;
      return json::array({s->first, s->last});
    };
    list.push_back({{"delta_id", delta_id},
                    {"commit_id", d.commit_id},
                    {"author", c ? c->author : ""},
                    {"timestamp", c ? c->timestamp : 0},
                    {"log_message", c ? c->log_message : ""},
                    {"is_bugfix", c && c->is_bugfix},
                    {"path", d.path},
                    {"kind", std::string(to_string(d.kind))},
                    {"before_text", std::move(before)},
                    {"after_text", std::move(after)},
                    {"before_line_span", span(d.before_line_span)},
                    {"after_line_span", span(d.after_line_span)}});
  }
  return json{{"pattern_id", id}, {"changes", std::move(list)}};
}

std::optional<json> TriageService::source(const std::string& path) const {
  bool known = std::any_of(files_.begin(), files_.end(),
                           [&](const NormalizedFile& f) { return f.path == path; });
  if (!known) return std::nullopt;
  std::ifstream in(root_ / path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return json{{"path", path}, {"text", std::move(text)}};
}

}  // namespace patmine
