#include "fixture_repo.hpp"

#include <stdlib.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "process.hpp"

namespace patmine::testing {

TempDir::TempDir() {
  auto pattern = (std::filesystem::temp_directory_path() / "patmine-test-XXXXXX").string();
  if (::mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

FixtureRepo::FixtureRepo() {
  git({"init", "-q", "-b", "master"});
  git({"config", "user.email", "fixture@example.com"});
  git({"config", "user.name", "fixture"});
}

int FixtureRepo::add(FixtureCommit c) {
  int mark = next_mark_++;
  std::ostringstream s;
  s << "commit refs/heads/" << c.branch << "\n";
  s << "mark :" << mark << "\n";
  s << "author " << c.author << " <" << c.author << "@example.com> " << c.time << " +0000\n";
  s << "committer " << c.author << " <" << c.author << "@example.com> " << c.time << " +0000\n";
  s << "data " << c.message.size() << "\n" << c.message << "\n";
  if (c.from != 0) s << "from :" << c.from << "\n";
  for (int m : c.merges) s << "merge :" << m << "\n";
  for (const auto& [path, content] : c.files) {
    if (content) {
      s << "M 100644 inline " << path << "\n";
      s << "data " << content->size() << "\n" << *content << "\n";
    } else {
      s << "D " << path << "\n";
    }
  }
  s << "\n";
  stream_ += s.str();
  return mark;
}

void FixtureRepo::build(const std::string& checkout) {
  auto marks = dir_.path() / ".git" / "fixture-marks";
  auto r = detail::run_process({"git", "-C", dir_.path().string(), "fast-import", "--quiet",
                                "--export-marks=" + marks.string()},
                               stream_);
  if (r.exit_code != 0) throw std::runtime_error("fast-import failed: " + r.err);
  stream_.clear();
  std::ifstream in(marks);
  std::string mark, id;
  while (in >> mark >> id) ids_[std::stoi(mark.substr(1))] = id;
  if (!ids_.empty()) git({"checkout", "-q", "-f", checkout});
}

std::string FixtureRepo::id(int mark) const { return ids_.at(mark); }

std::string FixtureRepo::git(const std::vector<std::string>& args) const {
  std::vector<std::string> argv{"git", "-C", dir_.path().string()};
  argv.insert(argv.end(), args.begin(), args.end());
  auto r = detail::run_process(argv);
  if (r.exit_code != 0) throw std::runtime_error("git failed: " + r.err);
  return r.out;
}

}  // namespace patmine::testing
