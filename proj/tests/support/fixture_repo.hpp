#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace patmine::testing {

// Removes the directory tree on destruction.
class TempDir {
 public:
  TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir();

  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

struct FixtureCommit {
  std::string branch = "master";
  std::string author = "dev";
  std::int64_t time = 1262563200;  // 2010-01-04
  std::string message = "change";
  // nullopt deletes the file.
  std::map<std::string, std::optional<std::string>> files;
  // Mark of the commit to start from (0 = continue the branch).
  int from = 0;
  // Marks merged into this commit after the first parent.
  std::vector<int> merges;
};

// Builds a git repository with `git fast-import` and checks out master.
class FixtureRepo {
 public:
  FixtureRepo();

  // Queues a commit and returns its mark (1-based).
  int add(FixtureCommit commit);

  // Writes all queued commits. The work tree ends up at the tip of `checkout`.
  void build(const std::string& checkout = "master");

  [[nodiscard]] const std::filesystem::path& path() const noexcept { return dir_.path(); }

  // Commit id for a mark; valid after build().
  [[nodiscard]] std::string id(int mark) const;

  // Runs git in the repository and returns stdout; throws on failure.
  std::string git(const std::vector<std::string>& args) const;

 private:
  TempDir dir_;
  std::string stream_;
  int next_mark_ = 1;
  std::map<int, std::string> ids_;
};

}  // namespace patmine::testing
