#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>

#include "patmine/pipeline.hpp"
#include "patmine/psbp_filter.hpp"
#include "support/fixture_repo.hpp"
#include "support/scenarios.hpp"

namespace patmine {
namespace {

std::vector<PatternId> ids_of(const std::vector<Psbp>& psbps) {
  std::vector<PatternId> out;
  for (const auto& p : psbps) out.push_back(p.pattern_id);
  return out;
}

bool is_subset(std::vector<PatternId> a, std::vector<PatternId> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

TEST(PsbpFilter, CraftedStoreKeepsExpectedIds) {
  auto store = testing::crafted_condition_store();
  ASSERT_EQ(store.patterns().size(), 7u);
  EXPECT_EQ(filter_condition_1(store, bugfix_commit_ids(store)),
            (std::vector<PatternId>{1, 2, 3, 4, 6, 7}));
  auto psbps = extract_psbps(store);
  ASSERT_EQ(ids_of(psbps), (std::vector<PatternId>{1, 7}));
  EXPECT_EQ(psbps[0].bugfix_commit_ids, std::vector<std::string>{std::string(40, '1')});
  EXPECT_EQ(psbps[1].bugfix_commit_ids, std::vector<std::string>{std::string(40, '3')});
}

TEST(PsbpFilter, ConditionTwoConsultsTheWholeStore) {
  auto store = testing::crafted_condition_store();
  // Pattern 3 alone as a candidate still collides with pattern 2.
  std::vector<PatternId> only_three = {3};
  EXPECT_TRUE(filter_condition_2(store, only_three).empty());
  std::vector<PatternId> five = {5};
  EXPECT_EQ(filter_condition_2(store, five), five);
  std::vector<PatternId> addition = {6};
  EXPECT_TRUE(filter_condition_2(store, addition).empty());
}

TEST(PsbpFilter, EmptyInputs) {
  EXPECT_TRUE(extract_psbps(PatternStore{}).empty());
  auto store = testing::crafted_condition_store();
  EXPECT_TRUE(extract_psbps(store, {}).empty());
}

// Random stores over a small statement alphabet so that before-texts collide.
PatternStore random_store(std::mt19937& rng) {
  std::vector<CommitRecord> commits;
  for (char c : std::string("abcdef")) {
    commits.push_back({std::string(40, c), "", std::string(1, c), 0, "log", false});
  }
  const std::vector<std::string> pool = {"a ;", "b ;", "c ;"};
  std::vector<CodeDelta> deltas;
  int n = 1 + static_cast<int>(rng() % 25);
  for (int i = 0; i < n; ++i) {
    CodeDelta d;
    d.commit_id = commits[rng() % commits.size()].id;
    d.path = "F" + std::to_string(rng() % 4) + ".java";
    int nb = static_cast<int>(rng() % 3), na = static_cast<int>(rng() % 2);
    if (nb + na == 0) nb = 1;
    for (int k = 0; k < nb; ++k) d.before.push_back(testing::stmt(pool[rng() % pool.size()], 1));
    for (int k = 0; k < na; ++k) d.after.push_back(testing::stmt(pool[rng() % pool.size()], 2));
    d.kind = nb == 0 ? DeltaKind::Addition : na == 0 ? DeltaKind::Deletion : DeltaKind::Replacement;
    if (nb) d.before_line_span = LineSpan{1, 1};
    if (na) d.after_line_span = LineSpan{2, 2};
    deltas.push_back(std::move(d));
  }
  return PatternStore::build(std::move(commits), std::move(deltas));
}

TEST(PsbpFilterProperty, InvariantsHoldExhaustively) {
  std::mt19937 rng(23);
  for (int iter = 0; iter < 300; ++iter) {
    auto store = random_store(rng);
    std::set<std::string> fixes;
    for (const auto& c : store.commits()) {
      if (rng() % 2) fixes.insert(c.id);
    }
    auto psbps = extract_psbps(store, fixes);
    auto cond1 = filter_condition_1(store, fixes);
    EXPECT_TRUE(is_subset(ids_of(psbps), cond1));

    std::map<std::string, int> before_owners;
    for (const auto& p : store.patterns()) ++before_owners[p.before_key];
    for (const auto& psbp : psbps) {
      const auto& p = store.pattern(psbp.pattern_id);
      EXPECT_FALSE(p.is_addition());
      EXPECT_GE(p.delta_ids.size(), 2u);
      EXPECT_EQ(before_owners[p.before_key], 1);
      ASSERT_FALSE(psbp.bugfix_commit_ids.empty());
      EXPECT_TRUE(std::is_sorted(psbp.bugfix_commit_ids.begin(), psbp.bugfix_commit_ids.end()));
      for (const auto& id : psbp.bugfix_commit_ids) EXPECT_TRUE(fixes.contains(id));
    }
    // Every pattern not returned must violate some condition.
    for (const auto& p : store.patterns()) {
      bool returned = std::any_of(psbps.begin(), psbps.end(),
                                  [&](const Psbp& s) { return s.pattern_id == p.id; });
      bool from_fix = std::any_of(p.delta_ids.begin(), p.delta_ids.end(), [&](DeltaId id) {
        return fixes.contains(store.delta(id).commit_id);
      });
      bool expected = from_fix && !p.is_addition() && p.delta_ids.size() >= 2 &&
                      before_owners[p.before_key] == 1;
      EXPECT_EQ(returned, expected);
    }
  }
}

TEST(PsbpFilterProperty, MonotoneInBugfixSet) {
  std::mt19937 rng(29);
  for (int iter = 0; iter < 300; ++iter) {
    auto store = random_store(rng);
    std::set<std::string> small, large;
    for (const auto& c : store.commits()) {
      auto r = rng() % 3;
      if (r == 0) small.insert(c.id);
      if (r != 2) large.insert(c.id);
    }
    EXPECT_TRUE(is_subset(ids_of(extract_psbps(store, small)), ids_of(extract_psbps(store, large))));
  }
}

TEST(PsbpFilter, RegexModeFlagsMoreThanIdSubset) {
  testing::FixtureRepo repo;
  testing::build_synthetic_history(repo, 80, 4, 5);
  auto ids = repo.path() / ".git" / "ids.txt";
  std::ofstream(ids) << "GEN-4\nGEN-8\n";

  MineConfig by_ids;
  by_ids.repo = repo.path();
  by_ids.issue_file = ids;
  by_ids.threads = 1;
  MineConfig by_regex = by_ids;
  by_regex.issue_file.reset();
  by_regex.issue_regex = "GEN-[0-9]+";

  auto a = mine(by_ids);
  auto b = mine(by_regex);
  EXPECT_EQ(a.summary.bugfix_commits, 2u);
  EXPECT_EQ(b.summary.bugfix_commits, 19u);
  EXPECT_EQ(a.summary.patterns, b.summary.patterns);
  auto cond1_a = filter_condition_1(a.store, bugfix_commit_ids(a.store));
  auto cond1_b = filter_condition_1(b.store, bugfix_commit_ids(b.store));
  EXPECT_TRUE(is_subset(cond1_a, cond1_b));
  EXPECT_GT(cond1_b.size(), cond1_a.size());
  EXPECT_TRUE(is_subset(ids_of(extract_psbps(a.store)), ids_of(extract_psbps(b.store))));
}

}  // namespace
}  // namespace patmine
