#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace patmine {

struct CommitRecord {
  std::string id;      // 40 lowercase hex
  std::string parent;  // first parent, empty for a root commit
  std::string author;
  std::int64_t timestamp = 0;  // committer time, UTC seconds
  std::string log_message;
  bool is_bugfix = false;

  friend bool operator==(const CommitRecord&, const CommitRecord&) = default;
};

[[nodiscard]] bool is_commit_id(std::string_view s);

struct FileChange {
  std::string path;
  std::string before_text;  // empty when the file is created
  std::string after_text;   // empty when the file is deleted

  friend bool operator==(const FileChange&, const FileChange&) = default;
};

// Decides whether a commit log names a bug-related issue.
class IssueMatcher {
 public:
  enum class Mode { IdList, Regex };

  // Throws ConfigError when ids is empty.
  [[nodiscard]] static IssueMatcher from_ids(std::vector<std::string> ids);
  // One ID per line; blank lines and surrounding whitespace are ignored.
  [[nodiscard]] static IssueMatcher from_id_file(const std::filesystem::path& file);
  // Throws ConfigError when the pattern does not compile.
  [[nodiscard]] static IssueMatcher from_regex(std::string pattern);

  [[nodiscard]] Mode mode() const noexcept { return mode_; }
  [[nodiscard]] const std::vector<std::string>& ids() const noexcept { return ids_; }
  [[nodiscard]] const std::string& pattern() const noexcept { return pattern_; }

  [[nodiscard]] bool matches(std::string_view log_message) const;

 private:
  IssueMatcher() = default;

  Mode mode_ = Mode::IdList;
  std::vector<std::string> ids_;
  std::string pattern_;
  std::regex regex_;
};

// In id-list mode an ID only counts when the character after it is not a
// digit, so CAMEL-72 does not fire on CAMEL-7201.
[[nodiscard]] bool is_bugfix(std::string_view log_message, const IssueMatcher& matcher);

struct SourceFilter {
  std::vector<std::string> extensions{".java"};

  [[nodiscard]] bool accepts(std::string_view path) const;
};

// Parses YYYY-MM-DD as UTC midnight. Throws ConfigError on bad input.
[[nodiscard]] std::int64_t parse_date(std::string_view date);

// Read-only view over a local git clone, driven through the git executable.
class GitRepository {
 public:
  // Throws ConfigError when path is not a readable repository.
  explicit GitRepository(std::filesystem::path path);

  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

  // First-parent chain from the branch tip, oldest first. Commits with a
  // timestamp earlier than `since` are left out. A repository without any
  // commit yields nothing; an unknown branch throws ConfigError.
  [[nodiscard]] std::vector<CommitRecord> walk_history(
      const std::string& branch, std::optional<std::int64_t> since = std::nullopt) const;

  // Source files whose blob differs from the first parent. Renames show up
  // as a deletion plus a creation. Binary or non UTF-8 blobs are skipped
  // and reported through `warnings`.
  [[nodiscard]] std::vector<FileChange> changed_source_files(
      const CommitRecord& commit, const SourceFilter& filter,
      std::vector<std::string>* warnings = nullptr) const;

  [[nodiscard]] std::string read_blob(const std::string& object) const;

 private:
  std::filesystem::path path_;
};

[[nodiscard]] bool is_text_blob(std::string_view bytes);

}  // namespace patmine
