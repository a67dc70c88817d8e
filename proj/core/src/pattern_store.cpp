#include "patmine/pattern_store.hpp"

#include <map>
#include <set>

#include "patmine/error.hpp"

namespace patmine {

namespace {

std::vector<std::string> texts_of(const std::vector<NormalizedStatement>& statements) {
  std::vector<std::string> out;
  out.reserve(statements.size());
  for (const auto& s : statements) out.push_back(s.normalized_text);
  return out;
}

}  // namespace

std::vector<ChangePattern> group_deltas(std::span<const CodeDelta> deltas) {
  std::vector<ChangePattern> patterns;
  std::map<DeltaKey, std::size_t> by_key;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const auto& d = deltas[i];
    auto key = DeltaKey::of(d);
    auto [it, inserted] = by_key.try_emplace(key, patterns.size());
    if (inserted) {
      ChangePattern p;
      p.id = static_cast<PatternId>(patterns.size() + 1);
      p.before_key = std::move(key.before_key);
      p.after_key = std::move(key.after_key);
      p.before_text = texts_of(d.before);
      p.after_text = texts_of(d.after);
      p.metrics.size = static_cast<std::int64_t>(d.before.size());
      patterns.push_back(std::move(p));
    }
    auto& p = patterns[it->second];
    if (!inserted && (p.before_text != texts_of(d.before) || p.after_text != texts_of(d.after))) {
      throw IntegrityError("digest collision: delta " + std::to_string(i + 1) +
                           " shares the keys of pattern " + std::to_string(p.id) +
                           " but its normalized text differs");
    }
    p.delta_ids.push_back(static_cast<DeltaId>(i + 1));
    p.metrics.support = static_cast<std::int64_t>(p.delta_ids.size());
  }
  return patterns;
}

PatternMetrics compute_metrics(const ChangePattern& pattern, const PatternStore& store) {
  std::set<std::string> files, commits, authors;
  for (auto id : pattern.delta_ids) {
    const auto& d = store.delta(id);
    files.insert(d.path);
    commits.insert(d.commit_id);
    if (const auto* c = store.find_commit(d.commit_id)) authors.insert(c->author);
  }
  PatternMetrics m;
  m.size = static_cast<std::int64_t>(pattern.before_text.size());
  m.files = static_cast<std::int64_t>(files.size());
  m.commits = static_cast<std::int64_t>(commits.size());
  m.authors = static_cast<std::int64_t>(authors.size());
  m.support = static_cast<std::int64_t>(pattern.delta_ids.size());
  m.matched = pattern.metrics.matched;
  return m;
}

PatternStore::PatternStore(std::vector<CommitRecord> commits, std::vector<CodeDelta> deltas,
                           std::vector<ChangePattern> patterns)
    : commits_(std::move(commits)), deltas_(std::move(deltas)), patterns_(std::move(patterns)) {
  index();
  check_integrity();
}

PatternStore PatternStore::build(std::vector<CommitRecord> commits, std::vector<CodeDelta> deltas) {
  PatternStore store;
  store.commits_ = std::move(commits);
  store.deltas_ = std::move(deltas);
  store.patterns_ = group_deltas(store.deltas_);
  store.index();
  for (auto& p : store.patterns_) p.metrics = compute_metrics(p, store);
  store.check_integrity();
  return store;
}

void PatternStore::index() {
  commit_index_.clear();
  pattern_index_.clear();
  for (std::size_t i = 0; i < commits_.size(); ++i) {
    if (!commit_index_.emplace(commits_[i].id, i).second) {
      throw IntegrityError("duplicate commit " + commits_[i].id);
    }
  }
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    if (!pattern_index_.emplace(patterns_[i].id, i).second) {
      throw IntegrityError("duplicate pattern id " + std::to_string(patterns_[i].id));
    }
  }
}

const CommitRecord* PatternStore::find_commit(const std::string& id) const {
  auto it = commit_index_.find(id);
  return it == commit_index_.end() ? nullptr : &commits_[it->second];
}

const CodeDelta& PatternStore::delta(DeltaId id) const {
  if (id < 1 || static_cast<std::size_t>(id) > deltas_.size()) {
    throw IntegrityError("no delta with id " + std::to_string(id));
  }
  return deltas_[static_cast<std::size_t>(id - 1)];
}

const ChangePattern* PatternStore::find_pattern(PatternId id) const {
  auto it = pattern_index_.find(id);
  return it == pattern_index_.end() ? nullptr : &patterns_[it->second];
}

const ChangePattern& PatternStore::pattern(PatternId id) const {
  const auto* p = find_pattern(id);
  if (!p) throw IntegrityError("no pattern with id " + std::to_string(id));
  return *p;
}

void PatternStore::set_matched(PatternId id, std::int64_t matched) {
  auto it = pattern_index_.find(id);
  if (it == pattern_index_.end()) throw IntegrityError("no pattern with id " + std::to_string(id));
  patterns_[it->second].metrics.matched = matched;
}

void PatternStore::check_integrity() const {
  auto fail = [](const std::string& what) { throw IntegrityError(what); };
  for (const auto& c : commits_) {
    if (!is_commit_id(c.id)) fail("malformed commit id '" + c.id + "'");
  }
  std::vector<int> owner(deltas_.size(), 0);
  for (std::size_t i = 0; i < deltas_.size(); ++i) {
    const auto& d = deltas_[i];
    auto where = "delta " + std::to_string(i + 1);
    if (!find_commit(d.commit_id)) fail(where + " references unknown commit " + d.commit_id);
    bool shape_ok = (d.kind == DeltaKind::Deletion && !d.before.empty() && d.after.empty()) ||
                    (d.kind == DeltaKind::Addition && d.before.empty() && !d.after.empty()) ||
                    (d.kind == DeltaKind::Replacement && !d.before.empty() && !d.after.empty());
    if (!shape_ok) fail(where + " has statements inconsistent with its kind");
    if (d.before.empty() == d.before_line_span.has_value() ||
        d.after.empty() == d.after_line_span.has_value()) {
      fail(where + " has line spans inconsistent with its statements");
    }
    for (const auto* side : {&d.before, &d.after}) {
      for (const auto& s : *side) {
        if (md5(s.normalized_text) != s.digest) {
          fail(where + ": digest does not match text '" + s.normalized_text + "'");
        }
      }
    }
  }
  for (const auto& p : patterns_) {
    auto where = "pattern " + std::to_string(p.id);
    if (p.delta_ids.empty()) fail(where + " has no deltas");
    for (auto id : p.delta_ids) {
      if (id < 1 || static_cast<std::size_t>(id) > deltas_.size()) {
        fail(where + " references unknown delta " + std::to_string(id));
      }
      if (owner[static_cast<std::size_t>(id - 1)]++ > 0) {
        fail("delta " + std::to_string(id) + " belongs to more than one pattern");
      }
      auto key = DeltaKey::of(delta(id));
      if (key.before_key != p.before_key || key.after_key != p.after_key) {
        fail(where + " contains delta " + std::to_string(id) + " with different keys");
      }
    }
    const auto& m = p.metrics;
    if (m.support != static_cast<std::int64_t>(p.delta_ids.size()) || m.commits > m.support ||
        m.authors > m.commits || m.files > m.support) {
      fail(where + " violates metric bounds");
    }
  }
  for (std::size_t i = 0; i < owner.size(); ++i) {
    if (owner[i] == 0) {
      fail("delta " + std::to_string(i + 1) + " belongs to no pattern");
    }
  }
}

}  // namespace patmine
