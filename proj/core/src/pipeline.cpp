#include "patmine/pipeline.hpp"

#include "parallel.hpp"
#include "patmine/error.hpp"
#include "patmine/psbp_filter.hpp"

namespace patmine {

IssueMatcher MineConfig::issue_matcher() const {
  if (issue_file.has_value() == issue_regex.has_value()) {
    throw ConfigError("exactly one of --issues and --issue-regex is required");
  }
  return issue_file ? IssueMatcher::from_id_file(*issue_file)
                    : IssueMatcher::from_regex(*issue_regex);
}

std::vector<CodeDelta> commit_deltas(std::span<const FileChange> changes,
                                     const CommitRecord& commit,
                                     const AbstractionOptions& options,
                                     Diagnostics* diagnostics) {
  std::vector<CodeDelta> out;
  for (const auto& change : changes) {
    Diagnostics lex;
    auto before = abstract_file(change.before_text, change.path, options, &lex);
    auto after = abstract_file(change.after_text, change.path, options, &lex);
    if (diagnostics) {
      for (auto& d : lex) diagnostics->push_back(commit.id.substr(0, 12) + " " + change.path + ": " + d);
    }
    auto deltas = diff_files(before, after, commit);
    std::move(deltas.begin(), deltas.end(), std::back_inserter(out));
  }
  return out;
}

MineResult mine(const MineConfig& config) {
  auto matcher = config.issue_matcher();
  GitRepository repo(config.repo);
  auto commits = repo.walk_history(config.branch, config.since);
  for (auto& c : commits) c.is_bugfix = is_bugfix(c.log_message, matcher);

  std::vector<std::vector<CodeDelta>> per_commit(commits.size());
  std::vector<Diagnostics> notes(commits.size());
  std::vector<std::size_t> file_counts(commits.size(), 0);
  detail::parallel_for(commits.size(), config.threads, [&](std::size_t i) {
    auto changes = repo.changed_source_files(commits[i], config.sources, &notes[i]);
    file_counts[i] = changes.size();
    per_commit[i] = commit_deltas(changes, commits[i], config.abstraction, &notes[i]);
  });

  MineSummary summary;
  std::vector<CodeDelta> deltas;
  for (std::size_t i = 0; i < commits.size(); ++i) {
    summary.file_changes += file_counts[i];
    std::move(per_commit[i].begin(), per_commit[i].end(), std::back_inserter(deltas));
    std::move(notes[i].begin(), notes[i].end(), std::back_inserter(summary.warnings));
  }

  auto store = PatternStore::build(std::move(commits), std::move(deltas));
  auto bugfix = bugfix_commit_ids(store);
  summary.commits = store.commits().size();
  summary.bugfix_commits = bugfix.size();
  summary.deltas = store.deltas().size();
  summary.patterns = store.patterns().size();
  summary.patterns_condition_1 = filter_condition_1(store, bugfix).size();
  summary.psbps = extract_psbps(store, bugfix).size();
  return {std::move(store), std::move(summary)};
}

}  // namespace patmine
