#include "patmine/repo_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>

#include "patmine/error.hpp"
#include "process.hpp"

namespace patmine {

namespace {

constexpr std::string_view kNullObject = "0000000000000000000000000000000000000000";

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      extra = 1;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      extra = 2;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
        (extra == 3 && (cp < 0x10000 || cp > 0x10ffff)) ||
        (cp >= 0xd800 && cp <= 0xdfff)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

std::vector<std::string> git_args(const std::filesystem::path& repo,
                                  std::initializer_list<std::string> rest) {
  std::vector<std::string> args{"git", "-C", repo.string()};
  args.insert(args.end(), rest);
  return args;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(sep, start);
    if (end == std::string_view::npos) end = s.size();
    parts.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

struct RawEntry {
  std::string old_mode, new_mode, old_id, new_id, path;
};

// Parses `git diff-tree -z --raw` output.
std::vector<RawEntry> parse_raw_diff(std::string_view out) {
  std::vector<RawEntry> entries;
  std::size_t pos = 0;
  while (pos < out.size()) {
    auto meta_end = out.find('\0', pos);
    if (meta_end == std::string_view::npos) break;
    auto meta = out.substr(pos, meta_end - pos);
    pos = meta_end + 1;
    if (meta.empty() || meta.front() != ':') continue;
    auto fields = split(meta.substr(1), ' ');
    auto path_end = out.find('\0', pos);
    if (path_end == std::string_view::npos) path_end = out.size();
    auto path = out.substr(pos, path_end - pos);
    pos = path_end + 1;
    if (fields.size() < 5) continue;
    entries.push_back({std::string(fields[0]), std::string(fields[1]),
                       std::string(fields[2]), std::string(fields[3]),
                       std::string(path)});
  }
  return entries;
}

bool is_regular_file_mode(std::string_view mode) {
  return mode == "100644" || mode == "100755" || mode == "000000";
}

}  // namespace

bool is_commit_id(std::string_view s) {
  return s.size() == 40 && std::all_of(s.begin(), s.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

IssueMatcher IssueMatcher::from_ids(std::vector<std::string> ids) {
  std::erase_if(ids, [](const std::string& id) { return id.empty(); });
  if (ids.empty()) throw ConfigError("issue ID list is empty");
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  IssueMatcher m;
  m.mode_ = Mode::IdList;
  m.ids_ = std::move(ids);
  return m;
}

IssueMatcher IssueMatcher::from_id_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read issue file: " + file.string());
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    auto id = trim(line);
    if (!id.empty()) ids.push_back(std::move(id));
  }
  if (ids.empty()) throw ConfigError("issue file has no IDs: " + file.string());
  return from_ids(std::move(ids));
}

IssueMatcher IssueMatcher::from_regex(std::string pattern) {
  IssueMatcher m;
  m.mode_ = Mode::Regex;
  try {
    m.regex_ = std::regex(pattern, std::regex::ECMAScript | std::regex::optimize);
  } catch (const std::regex_error& e) {
    throw ConfigError("invalid issue regex '" + pattern + "': " + e.what());
  }
  m.pattern_ = std::move(pattern);
  return m;
}

bool IssueMatcher::matches(std::string_view log_message) const {
  if (mode_ == Mode::Regex) {
    return std::regex_search(log_message.begin(), log_message.end(), regex_);
  }
  for (const auto& id : ids_) {
    for (auto pos = log_message.find(id); pos != std::string_view::npos;
         pos = log_message.find(id, pos + 1)) {
      auto after = pos + id.size();
      if (after == log_message.size() ||
          !std::isdigit(static_cast<unsigned char>(log_message[after]))) {
        return true;
      }
    }
  }
  return false;
}

bool is_bugfix(std::string_view log_message, const IssueMatcher& matcher) {
  return matcher.matches(log_message);
}

bool SourceFilter::accepts(std::string_view path) const {
  return std::any_of(extensions.begin(), extensions.end(), [&](const std::string& ext) {
    return path.size() > ext.size() && path.ends_with(ext);
  });
}

std::int64_t parse_date(std::string_view date) {
  auto bad = [&] { return ConfigError("invalid date '" + std::string(date) + "', expected YYYY-MM-DD"); };
  if (date.size() != 10 || date[4] != '-' || date[7] != '-') throw bad();
  int y = 0;
  unsigned m = 0, d = 0;
  auto parse = [&](std::string_view part, auto& value) {
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || p != part.data() + part.size()) throw bad();
  };
  parse(date.substr(0, 4), y);
  parse(date.substr(5, 2), m);
  parse(date.substr(8, 2), d);
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok()) throw bad();
  return std::chrono::sys_days{ymd}.time_since_epoch() / std::chrono::seconds{1};
}

bool is_text_blob(std::string_view bytes) {
  return bytes.find('\0') == std::string_view::npos && valid_utf8(bytes);
}

GitRepository::GitRepository(std::filesystem::path path) : path_(std::move(path)) {
  std::error_code ec;
  if (!std::filesystem::is_directory(path_, ec)) {
    throw ConfigError("repository path is not a directory: " + path_.string());
  }
  auto r = detail::run_process(git_args(path_, {"rev-parse", "--git-dir"}));
  if (r.exit_code != 0) {
    throw ConfigError("not a readable git repository: " + path_.string() + ": " + trim(r.err));
  }
}

std::vector<CommitRecord> GitRepository::walk_history(const std::string& branch,
                                                      std::optional<std::int64_t> since) const {
  auto tip = detail::run_process(
      git_args(path_, {"rev-parse", "--verify", "--quiet", branch + "^{commit}"}));
  if (tip.exit_code != 0) {
    auto any = detail::run_process(git_args(path_, {"rev-list", "-n", "1", "--all"}));
    if (any.exit_code == 0 && trim(any.out).empty()) return {};
    throw ConfigError("unknown branch: " + branch);
  }

  auto log = detail::run_process(git_args(
      path_, {"log", "--first-parent", "--reverse", "-z", "--format=%H%n%P%n%an%n%ct%n%B",
              trim(tip.out), "--"}));
  if (log.exit_code != 0) {
    throw ConfigError("git log failed: " + trim(log.err));
  }

  std::vector<CommitRecord> commits;
  for (auto record : split(log.out, '\0')) {
    if (record.empty()) continue;
    auto next_line = [&record]() {
      auto nl = record.find('\n');
      auto line = record.substr(0, nl);
      record = nl == std::string_view::npos ? std::string_view{} : record.substr(nl + 1);
      return line;
    };
    CommitRecord c;
    c.id = std::string(next_line());
    auto parents = next_line();
    c.parent = std::string(parents.substr(0, parents.find(' ')));
    c.author = std::string(next_line());
    auto time = next_line();
    std::from_chars(time.data(), time.data() + time.size(), c.timestamp);
    while (!record.empty() && (record.back() == '\n' || record.back() == '\r')) {
      record.remove_suffix(1);
    }
    c.log_message = std::string(record);
    if (!is_commit_id(c.id)) {
      throw ConfigError("unexpected git log record for '" + c.id + "'");
    }
    if (since && c.timestamp < *since) continue;
    commits.push_back(std::move(c));
  }
  return commits;
}

std::vector<FileChange> GitRepository::changed_source_files(const CommitRecord& commit,
                                                            const SourceFilter& filter,
                                                            std::vector<std::string>* warnings) const {
  auto args = commit.parent.empty()
                  ? git_args(path_, {"diff-tree", "-r", "--root", "--no-renames", "--no-commit-id",
                                     "-z", "--raw", commit.id})
                  : git_args(path_, {"diff-tree", "-r", "--no-renames", "-z", "--raw",
                                     commit.parent, commit.id});
  auto diff = detail::run_process(args);
  if (diff.exit_code != 0) {
    throw ConfigError("git diff-tree failed for " + commit.id + ": " + trim(diff.err));
  }

  std::vector<RawEntry> entries;
  for (auto& e : parse_raw_diff(diff.out)) {
    if (!filter.accepts(e.path)) continue;
    if (!is_regular_file_mode(e.old_mode) || !is_regular_file_mode(e.new_mode)) continue;
    entries.push_back(std::move(e));
  }
  if (entries.empty()) return {};

  std::string request;
  for (const auto& e : entries) {
    if (e.old_id != kNullObject) request += e.old_id + "\n";
    if (e.new_id != kNullObject) request += e.new_id + "\n";
  }
  std::vector<std::pair<std::string, std::string>> blobs;
  if (!request.empty()) {
    auto batch = detail::run_process(git_args(path_, {"cat-file", "--batch"}), request);
    if (batch.exit_code != 0) {
      throw ConfigError("git cat-file failed: " + trim(batch.err));
    }
    std::string_view out = batch.out;
    while (!out.empty()) {
      auto nl = out.find('\n');
      if (nl == std::string_view::npos) break;
      auto header = split(out.substr(0, nl), ' ');
      out.remove_prefix(nl + 1);
      if (header.size() < 3) {
        throw ConfigError("unexpected cat-file header from " + path_.string());
      }
      std::size_t size = 0;
      std::from_chars(header[2].data(), header[2].data() + header[2].size(), size);
      blobs.emplace_back(std::string(header[0]), std::string(out.substr(0, size)));
      out.remove_prefix(std::min(out.size(), size + 1));
    }
  }

  auto content = [&](const std::string& id) -> const std::string* {
    for (const auto& [oid, bytes] : blobs) {
      if (oid == id) return &bytes;
    }
    return nullptr;
  };

  std::vector<FileChange> changes;
  for (const auto& e : entries) {
    FileChange change{e.path, {}, {}};
    bool ok = true;
    for (auto [id, sink] : {std::pair{&e.old_id, &change.before_text},
                            std::pair{&e.new_id, &change.after_text}}) {
      if (*id == kNullObject) continue;
      const auto* bytes = content(*id);
      if (bytes == nullptr || !is_text_blob(*bytes)) {
        ok = false;
        break;
      }
      *sink = *bytes;
    }
    if (!ok) {
      if (warnings) {
        warnings->push_back("skipping undecodable file " + e.path + " in " + commit.id);
      }
      continue;
    }
    if (change.before_text.empty() && change.after_text.empty()) continue;
    changes.push_back(std::move(change));
  }
  return changes;
}

std::string GitRepository::read_blob(const std::string& object) const {
  auto r = detail::run_process(git_args(path_, {"cat-file", "blob", object}));
  if (r.exit_code != 0) throw ConfigError("cannot read blob " + object + ": " + trim(r.err));
  return r.out;
}

}  // namespace patmine
