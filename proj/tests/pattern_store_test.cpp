#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "patmine/error.hpp"
#include "patmine/pattern_store.hpp"
#include "support/fixture_repo.hpp"
#include "support/scenarios.hpp"

namespace patmine {
namespace {

using testing::stmt;

CommitRecord commit(char c, std::string author, std::string log = "log", bool fix = false) {
  return CommitRecord{std::string(40, c), "", std::move(author), 100, std::move(log), fix};
}

CodeDelta delta(char c, std::string path, std::vector<std::string> before,
                std::vector<std::string> after) {
  CodeDelta d;
  d.commit_id = std::string(40, c);
  d.path = std::move(path);
  std::uint32_t line = 1;
  for (const auto& t : before) d.before.push_back(stmt(t, line++));
  for (const auto& t : after) d.after.push_back(stmt(t, line++));
  d.kind = d.before.empty() ? DeltaKind::Addition
           : d.after.empty() ? DeltaKind::Deletion
                             : DeltaKind::Replacement;
  if (!d.before.empty()) d.before_line_span = LineSpan{d.before.front().line_span.first, d.before.back().line_span.last};
  if (!d.after.empty()) d.after_line_span = LineSpan{d.after.front().line_span.first, d.after.back().line_span.last};
  return d;
}

TEST(GroupDeltas, EightInstancesInSixCommits) {
  std::vector<CommitRecord> commits;
  for (char c : std::string("abcdef")) commits.push_back(commit(c, "dev"));
  std::vector<CodeDelta> deltas;
  for (char c : std::string("aabbcdef")) {
    deltas.push_back(delta(c, std::string(1, c) + ".java", {"V0 V1 = getManagementName ( ) ;"},
                           {"V0 V1 = getQuartzContextName ( V2 ) ;"}));
  }
  auto store = PatternStore::build(commits, deltas);
  ASSERT_EQ(store.patterns().size(), 1u);
  EXPECT_EQ(store.patterns()[0].metrics.support, 8);
  EXPECT_EQ(store.patterns()[0].metrics.commits, 6);
  EXPECT_EQ(store.patterns()[0].metrics.matched, -1);
}

TEST(GroupDeltas, SameBeforeDifferentAfterGivesTwoPatterns) {
  std::vector<CodeDelta> deltas = {delta('a', "A.java", {"V0 ( ) ;"}, {"x ( ) ;"}),
                                   delta('a', "A.java", {"V0 ( ) ;"}, {"y ( ) ;"})};
  auto patterns = group_deltas(deltas);
  ASSERT_EQ(patterns.size(), 2u);
  EXPECT_EQ(patterns[0].before_key, patterns[1].before_key);
  EXPECT_NE(patterns[0].after_key, patterns[1].after_key);
  EXPECT_EQ(patterns[0].delta_ids, std::vector<DeltaId>{1});
  EXPECT_EQ(patterns[1].delta_ids, std::vector<DeltaId>{2});
}

TEST(GroupDeltas, IdsFollowFirstOccurrence) {
  std::vector<CodeDelta> deltas = {delta('a', "A.java", {"p ;"}, {"q ;"}),
                                   delta('a', "A.java", {"r ;"}, {}),
                                   delta('a', "A.java", {"p ;"}, {"q ;"}),
                                   delta('a', "A.java", {}, {"s ;"})};
  auto patterns = group_deltas(deltas);
  ASSERT_EQ(patterns.size(), 3u);
  EXPECT_EQ(patterns[0].id, 1);
  EXPECT_EQ(patterns[0].delta_ids, (std::vector<DeltaId>{1, 3}));
  EXPECT_EQ(patterns[0].before_text, std::vector<std::string>{"p ;"});
  EXPECT_EQ(patterns[1].after_key, "");
  EXPECT_TRUE(patterns[2].is_addition());
}

TEST(GroupDeltas, DigestCollisionIsAnIntegrityError) {
  auto a = delta('a', "A.java", {"x ;"}, {"y ;"});
  auto b = a;
  b.before[0].normalized_text = "z ;";  // same digest, different text
  std::vector<CodeDelta> deltas = {a, b};
  EXPECT_THROW((void)group_deltas(deltas), IntegrityError);
}

TEST(ComputeMetrics, CountsDistinctValues) {
  std::vector<CommitRecord> commits = {commit('1', "x"), commit('2', "x"), commit('3', "y")};
  std::vector<CodeDelta> deltas = {delta('1', "A.java", {"a ;"}, {"b ;"}),
                                   delta('2', "B.java", {"a ;"}, {"b ;"}),
                                   delta('3', "A.java", {"a ;"}, {"b ;"})};
  auto store = PatternStore::build(commits, deltas);
  ASSERT_EQ(store.patterns().size(), 1u);
  PatternMetrics expected{1, 2, 3, 2, 3, -1};
  EXPECT_EQ(store.patterns()[0].metrics, expected);
  EXPECT_EQ(compute_metrics(store.patterns()[0], store), expected);
}

TEST(ComputeMetrics, SingleDelta) {
  auto store = PatternStore::build({commit('1', "x")},
                                   {delta('1', "A.java", {"a ;", "b ;"}, {"c ;"})});
  PatternMetrics expected{2, 1, 1, 1, 1, -1};
  EXPECT_EQ(store.patterns().at(0).metrics, expected);
}

TEST(PatternStore, IntegrityChecks) {
  auto good = testing::crafted_condition_store();
  EXPECT_NO_THROW(good.check_integrity());

  auto deltas = good.deltas();
  deltas[0].commit_id = std::string(40, '9');
  EXPECT_THROW(PatternStore(good.commits(), deltas, good.patterns()), IntegrityError);

  auto patterns = good.patterns();
  patterns[0].delta_ids.pop_back();
  EXPECT_THROW(PatternStore(good.commits(), good.deltas(), patterns), IntegrityError);

  patterns = good.patterns();
  patterns[0].metrics.authors = patterns[0].metrics.commits + 1;
  EXPECT_THROW(PatternStore(good.commits(), good.deltas(), patterns), IntegrityError);

  deltas = good.deltas();
  deltas[0].kind = DeltaKind::Deletion;
  EXPECT_THROW(PatternStore(good.commits(), deltas, good.patterns()), IntegrityError);
}

TEST(PatternStore, SetMatchedAndLookups) {
  auto store = testing::crafted_condition_store();
  store.set_matched(2, 5);
  EXPECT_EQ(store.pattern(2).metrics.matched, 5);
  EXPECT_EQ(store.find_pattern(99), nullptr);
  EXPECT_NE(store.find_commit(std::string(40, '1')), nullptr);
  EXPECT_EQ(store.delta(1).path, "A.java");
}

// Map from key to sorted delta contents; independent of id assignment.
std::map<DeltaKey, std::vector<std::string>> partition_of(const PatternStore& store) {
  std::map<DeltaKey, std::vector<std::string>> out;
  for (const auto& p : store.patterns()) {
    auto& members = out[{p.before_key, p.after_key}];
    for (DeltaId id : p.delta_ids) {
      const auto& d = store.delta(id);
      members.push_back(d.commit_id + d.path + std::to_string(d.before_line_span ? d.before_line_span->first : 0));
    }
    std::sort(members.begin(), members.end());
  }
  return out;
}

TEST(PatternStoreProperty, PartitionAndOrderInsensitivity) {
  std::mt19937 rng(17);
  const std::vector<std::string> pool = {"a ;", "b ;", "c ;", "d ;"};
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<CommitRecord> commits = {commit('1', "x"), commit('2', "y"), commit('3', "x")};
    std::vector<CodeDelta> deltas;
    int n = 1 + static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> before, after;
      int nb = static_cast<int>(rng() % 3), na = static_cast<int>(rng() % 3);
      if (nb == 0 && na == 0) nb = 1;
      for (int k = 0; k < nb; ++k) before.push_back(pool[rng() % pool.size()]);
      for (int k = 0; k < na; ++k) after.push_back(pool[rng() % pool.size()]);
      auto d = delta("123"[rng() % 3], "F" + std::to_string(i) + ".java", before, after);
      deltas.push_back(d);
    }
    auto store = PatternStore::build(commits, deltas);

    std::int64_t total = 0;
    std::vector<int> owners(deltas.size(), 0);
    for (const auto& p : store.patterns()) {
      total += p.metrics.support;
      EXPECT_LE(p.metrics.authors, p.metrics.commits);
      EXPECT_LE(p.metrics.commits, p.metrics.support);
      EXPECT_LE(p.metrics.files, p.metrics.support);
      for (DeltaId id : p.delta_ids) {
        ++owners[static_cast<std::size_t>(id - 1)];
        EXPECT_EQ(DeltaKey::of(store.delta(id)), (DeltaKey{p.before_key, p.after_key}));
      }
    }
    EXPECT_EQ(total, static_cast<std::int64_t>(deltas.size()));
    EXPECT_TRUE(std::all_of(owners.begin(), owners.end(), [](int o) { return o == 1; }));

    auto shuffled = deltas;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto other = PatternStore::build(commits, shuffled);
    EXPECT_EQ(partition_of(store), partition_of(other));
  }
}

PatternStore unicode_store() {
  auto base = testing::crafted_condition_store();
  auto commits = base.commits();
  commits[0].log_message = "BUG-1 \xe4\xbf\xae\xe6\xad\xa3 na\xc3\xafve \xf0\x9f\x90\x9b\n\"quoted\"\ttab";
  commits[1].parent = commits[0].id;
  commits[1].timestamp = 1262563200;
  return PatternStore::build(commits, base.deltas());
}

TEST(Jsonl, EmptyStoreRoundTrip) {
  std::stringstream buf;
  export_jsonl(PatternStore{}, buf);
  EXPECT_TRUE(buf.str().empty());
  EXPECT_EQ(import_jsonl(buf), PatternStore{});
}

TEST(Jsonl, RoundTripIsIdentity) {
  auto store = unicode_store();
  store.set_matched(1, 3);
  std::stringstream first;
  export_jsonl(store, first);
  auto text = first.str();
  auto back = import_jsonl(first);
  EXPECT_EQ(back, store);
  std::stringstream second;
  export_jsonl(back, second);
  EXPECT_EQ(second.str(), text);
  EXPECT_NE(text.find("\xf0\x9f\x90\x9b"), std::string::npos);
}

TEST(Jsonl, SinglePatternStore) {
  auto store = PatternStore::build({commit('1', "x")}, {delta('1', "A.java", {"a ;"}, {"b ;"})});
  std::stringstream buf;
  export_jsonl(store, buf);
  auto text = buf.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_EQ(import_jsonl(buf), store);
}

TEST(Jsonl, MalformedLineNamesLineNumber) {
  auto store = unicode_store();
  std::stringstream buf;
  export_jsonl(store, buf);
  std::vector<std::string> lines;
  for (std::string line; std::getline(buf, line);) lines.push_back(line);
  ASSERT_GT(lines.size(), 3u);

  auto import_with = [&](std::size_t index, const std::string& replacement) -> std::size_t {
    std::stringstream in;
    for (std::size_t i = 0; i < lines.size(); ++i) in << (i == index ? replacement : lines[i]) << '\n';
    try {
      (void)import_jsonl(in);
    } catch (const FormatError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(import_with(2, "{not json"), 3u);
  EXPECT_EQ(import_with(0, "{\"record\":\"mystery\"}"), 1u);
  EXPECT_EQ(import_with(lines.size() - 1, "[]"), lines.size());
}

TEST(Sqlite, RoundTrip) {
  testing::TempDir dir;
  auto db = dir.path() / "patterns.db";
  auto store = unicode_store();
  store.set_matched(7, 0);
  save_sqlite(store, db);
  EXPECT_EQ(load_sqlite(db), store);
  save_sqlite(PatternStore{}, db);
  EXPECT_EQ(load_sqlite(db), PatternStore{});
}

TEST(Sqlite, MissingOrForeignFile) {
  testing::TempDir dir;
  EXPECT_THROW((void)load_sqlite(dir.path() / "nope.db"), ConfigError);
  std::ofstream(dir.path() / "text.db") << "hello";
  EXPECT_THROW((void)load_sqlite(dir.path() / "text.db"), ConfigError);
}

}  // namespace
}  // namespace patmine
