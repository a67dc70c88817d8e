#include <sqlite3.h>

#include <memory>

#include "patmine/error.hpp"
#include "patmine/pattern_store.hpp"

namespace patmine {

namespace {

constexpr int kSchemaVersion = 1;

constexpr const char* kSchema = R"sql(
CREATE TABLE meta(key TEXT PRIMARY KEY, value TEXT NOT NULL);
CREATE TABLE commits(
  seq INTEGER PRIMARY KEY,
  id TEXT NOT NULL UNIQUE,
  parent TEXT NOT NULL,
  author TEXT NOT NULL,
  time INTEGER NOT NULL,
  log TEXT NOT NULL,
  is_bugfix INTEGER NOT NULL);
CREATE TABLE deltas(
  id INTEGER PRIMARY KEY,
  commit_id TEXT NOT NULL REFERENCES commits(id),
  path TEXT NOT NULL,
  kind TEXT NOT NULL,
  before_key TEXT NOT NULL,
  after_key TEXT NOT NULL,
  before_text TEXT NOT NULL,
  after_text TEXT NOT NULL,
  before_first_line INTEGER,
  before_last_line INTEGER,
  after_first_line INTEGER,
  after_last_line INTEGER);
CREATE TABLE delta_statements(
  delta_id INTEGER NOT NULL REFERENCES deltas(id),
  side INTEGER NOT NULL,
  position INTEGER NOT NULL,
  text TEXT NOT NULL,
  digest TEXT NOT NULL,
  first_line INTEGER NOT NULL,
  last_line INTEGER NOT NULL,
  PRIMARY KEY(delta_id, side, position));
CREATE TABLE patterns(
  id INTEGER PRIMARY KEY,
  before_key TEXT NOT NULL,
  after_key TEXT NOT NULL,
  before_text TEXT NOT NULL,
  after_text TEXT NOT NULL,
  size INTEGER NOT NULL,
  files INTEGER NOT NULL,
  commits INTEGER NOT NULL,
  authors INTEGER NOT NULL,
  support INTEGER NOT NULL,
  matched INTEGER NOT NULL);
CREATE TABLE pattern_deltas(
  pattern_id INTEGER NOT NULL REFERENCES patterns(id),
  position INTEGER NOT NULL,
  delta_id INTEGER NOT NULL REFERENCES deltas(id),
  PRIMARY KEY(pattern_id, position));
CREATE INDEX patterns_before_key ON patterns(before_key);
)sql";

struct DbCloser {
  void operator()(sqlite3* db) const { sqlite3_close(db); }
};
struct StmtFinalizer {
  void operator()(sqlite3_stmt* s) const { sqlite3_finalize(s); }
};
using DbHandle = std::unique_ptr<sqlite3, DbCloser>;

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    sqlite3_stmt* raw = nullptr;
    if (sqlite3_prepare_v2(db, sql, -1, &raw, nullptr) != SQLITE_OK) {
      throw ConfigError(std::string("sqlite prepare failed: ") + sqlite3_errmsg(db));
    }
    stmt_.reset(raw);
  }

  Statement& bind(int idx, std::int64_t v) {
    check(sqlite3_bind_int64(stmt_.get(), idx, v));
    return *this;
  }
  Statement& bind(int idx, const std::string& v) {
    check(sqlite3_bind_text(stmt_.get(), idx, v.data(), static_cast<int>(v.size()),
                            SQLITE_TRANSIENT));
    return *this;
  }
  Statement& bind_null(int idx) {
    check(sqlite3_bind_null(stmt_.get(), idx));
    return *this;
  }

  // Returns true while rows are available.
  bool step() {
    int rc = sqlite3_step(stmt_.get());
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw ConfigError(std::string("sqlite step failed: ") + sqlite3_errmsg(db_));
  }

  void run_and_reset() {
    step();
    sqlite3_reset(stmt_.get());
    sqlite3_clear_bindings(stmt_.get());
  }

  [[nodiscard]] std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_.get(), col); }
  [[nodiscard]] bool is_null(int col) const {
    return sqlite3_column_type(stmt_.get(), col) == SQLITE_NULL;
  }
  [[nodiscard]] std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_.get(), col);
    int n = sqlite3_column_bytes(stmt_.get(), col);
    return p ? std::string(reinterpret_cast<const char*>(p), static_cast<std::size_t>(n))
             : std::string();
  }

 private:
  void check(int rc) const {
    if (rc != SQLITE_OK) throw ConfigError(std::string("sqlite bind failed: ") + sqlite3_errmsg(db_));
  }

  sqlite3* db_;
  std::unique_ptr<sqlite3_stmt, StmtFinalizer> stmt_;
};

void exec(sqlite3* db, const char* sql) {
  char* msg = nullptr;
  if (sqlite3_exec(db, sql, nullptr, nullptr, &msg) != SQLITE_OK) {
    std::string what = msg ? msg : "unknown error";
    sqlite3_free(msg);
    throw ConfigError("sqlite: " + what);
  }
}

DbHandle open_db(const std::filesystem::path& path, int flags) {
  sqlite3* raw = nullptr;
  int rc = sqlite3_open_v2(path.c_str(), &raw, flags, nullptr);
  DbHandle db(raw);
  if (rc != SQLITE_OK) {
    throw ConfigError("cannot open database " + path.string() + ": " +
                      (raw ? sqlite3_errmsg(raw) : "out of memory"));
  }
  return db;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

void bind_span(Statement& st, int first_idx, const std::optional<LineSpan>& span) {
  if (span) {
    st.bind(first_idx, span->first).bind(first_idx + 1, span->last);
  } else {
    st.bind_null(first_idx).bind_null(first_idx + 1);
  }
}

std::optional<LineSpan> read_span(const Statement& st, int first_idx) {
  if (st.is_null(first_idx)) return std::nullopt;
  return LineSpan{static_cast<std::uint32_t>(st.integer(first_idx)),
                  static_cast<std::uint32_t>(st.integer(first_idx + 1))};
}

}  // namespace

void save_sqlite(const PatternStore& store, const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::remove(path, ec);
  auto db = open_db(path, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE);
  exec(db.get(), "PRAGMA journal_mode=OFF; PRAGMA synchronous=OFF;");
  exec(db.get(), "BEGIN");
  exec(db.get(), kSchema);

  Statement meta(db.get(), "INSERT INTO meta(key, value) VALUES('schema_version', ?1)");
  meta.bind(1, std::to_string(kSchemaVersion)).run_and_reset();

  Statement commit(db.get(),
                   "INSERT INTO commits(seq, id, parent, author, time, log, is_bugfix) "
                   "VALUES(?1, ?2, ?3, ?4, ?5, ?6, ?7)");
  std::int64_t seq = 0;
  for (const auto& c : store.commits()) {
    commit.bind(1, seq++).bind(2, c.id).bind(3, c.parent).bind(4, c.author);
    commit.bind(5, c.timestamp).bind(6, c.log_message).bind(7, c.is_bugfix ? 1 : 0);
    commit.run_and_reset();
  }

  Statement delta(db.get(),
                  "INSERT INTO deltas(id, commit_id, path, kind, before_key, after_key, "
                  "before_text, after_text, before_first_line, before_last_line, "
                  "after_first_line, after_last_line) "
                  "VALUES(?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9, ?10, ?11, ?12)");
  Statement statement(db.get(),
                      "INSERT INTO delta_statements(delta_id, side, position, text, digest, "
                      "first_line, last_line) VALUES(?1, ?2, ?3, ?4, ?5, ?6, ?7)");
  DeltaId id = 1;
  for (const auto& d : store.deltas()) {
    auto key = DeltaKey::of(d);
    std::vector<std::string> before, after;
    for (const auto& s : d.before) before.push_back(s.normalized_text);
    for (const auto& s : d.after) after.push_back(s.normalized_text);
    delta.bind(1, id).bind(2, d.commit_id).bind(3, d.path).bind(4, std::string(to_string(d.kind)));
    delta.bind(5, key.before_key).bind(6, key.after_key);
    delta.bind(7, join_lines(before)).bind(8, join_lines(after));
    bind_span(delta, 9, d.before_line_span);
    bind_span(delta, 11, d.after_line_span);
    delta.run_and_reset();
    for (int side = 0; side < 2; ++side) {
      const auto& stmts = side == 0 ? d.before : d.after;
      for (std::size_t pos = 0; pos < stmts.size(); ++pos) {
        const auto& s = stmts[pos];
        statement.bind(1, id).bind(2, side).bind(3, static_cast<std::int64_t>(pos));
        statement.bind(4, s.normalized_text).bind(5, s.digest.hex());
        statement.bind(6, s.line_span.first).bind(7, s.line_span.last);
        statement.run_and_reset();
      }
    }
    ++id;
  }

  Statement pattern(db.get(),
                    "INSERT INTO patterns(id, before_key, after_key, before_text, after_text, "
                    "size, files, commits, authors, support, matched) "
                    "VALUES(?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9, ?10, ?11)");
  Statement member(db.get(),
                   "INSERT INTO pattern_deltas(pattern_id, position, delta_id) VALUES(?1, ?2, ?3)");
  for (const auto& p : store.patterns()) {
    const auto& m = p.metrics;
    pattern.bind(1, p.id).bind(2, p.before_key).bind(3, p.after_key);
    pattern.bind(4, join_lines(p.before_text)).bind(5, join_lines(p.after_text));
    pattern.bind(6, m.size).bind(7, m.files).bind(8, m.commits).bind(9, m.authors);
    pattern.bind(10, m.support).bind(11, m.matched);
    pattern.run_and_reset();
    for (std::size_t pos = 0; pos < p.delta_ids.size(); ++pos) {
      member.bind(1, p.id).bind(2, static_cast<std::int64_t>(pos)).bind(3, p.delta_ids[pos]);
      member.run_and_reset();
    }
  }
  exec(db.get(), "COMMIT");
}

PatternStore load_sqlite(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw ConfigError("database not found: " + path.string());
  }
  auto db = open_db(path, SQLITE_OPEN_READONLY);
  {
    sqlite3_stmt* probe = nullptr;
    int rc = sqlite3_prepare_v2(db.get(), "SELECT value FROM meta WHERE key='schema_version'", -1,
                                &probe, nullptr);
    std::unique_ptr<sqlite3_stmt, StmtFinalizer> guard(probe);
    if (rc != SQLITE_OK || sqlite3_step(probe) != SQLITE_ROW ||
        std::to_string(kSchemaVersion) !=
            reinterpret_cast<const char*>(sqlite3_column_text(probe, 0))) {
      throw ConfigError("not a pattern database (or unsupported schema): " + path.string());
    }
  }

  std::vector<CommitRecord> commits;
  Statement commit(db.get(),
                   "SELECT id, parent, author, time, log, is_bugfix FROM commits ORDER BY seq");
  while (commit.step()) {
    commits.push_back({commit.text(0), commit.text(1), commit.text(2), commit.integer(3),
                       commit.text(4), commit.integer(5) != 0});
  }

  std::vector<CodeDelta> deltas;
  Statement delta(db.get(),
                  "SELECT id, commit_id, path, kind, before_first_line, before_last_line, "
                  "after_first_line, after_last_line FROM deltas ORDER BY id");
  while (delta.step()) {
    if (delta.integer(0) != static_cast<std::int64_t>(deltas.size() + 1)) {
      throw ConfigError("database has non-consecutive delta ids: " + path.string());
    }
    CodeDelta d;
    d.commit_id = delta.text(1);
    d.path = delta.text(2);
    auto kind = delta_kind_from_string(delta.text(3));
    if (!kind) throw ConfigError("database has unknown delta kind '" + delta.text(3) + "'");
    d.kind = *kind;
    d.before_line_span = read_span(delta, 4);
    d.after_line_span = read_span(delta, 6);
    deltas.push_back(std::move(d));
  }

  Statement statement(db.get(),
                      "SELECT delta_id, side, text, digest, first_line, last_line "
                      "FROM delta_statements ORDER BY delta_id, side, position");
  while (statement.step()) {
    auto id = statement.integer(0);
    if (id < 1 || static_cast<std::size_t>(id) > deltas.size()) {
      throw ConfigError("database statement references unknown delta");
    }
    auto digest = Digest::from_hex(statement.text(3));
    if (!digest) throw ConfigError("database has a malformed digest");
    NormalizedStatement s{statement.text(2), *digest,
                          {static_cast<std::uint32_t>(statement.integer(4)),
                           static_cast<std::uint32_t>(statement.integer(5))}};
    auto& d = deltas[static_cast<std::size_t>(id - 1)];
    (statement.integer(1) == 0 ? d.before : d.after).push_back(std::move(s));
  }

  std::vector<ChangePattern> patterns;
  Statement pattern(db.get(),
                    "SELECT id, before_key, after_key, size, files, commits, authors, support, "
                    "matched FROM patterns ORDER BY id");
  while (pattern.step()) {
    ChangePattern p;
    p.id = pattern.integer(0);
    p.before_key = pattern.text(1);
    p.after_key = pattern.text(2);
    p.metrics = {pattern.integer(3), pattern.integer(4), pattern.integer(5),
                 pattern.integer(6), pattern.integer(7), pattern.integer(8)};
    patterns.push_back(std::move(p));
  }
  std::unordered_map<PatternId, std::size_t> index;
  for (std::size_t i = 0; i < patterns.size(); ++i) index[patterns[i].id] = i;
  Statement member(db.get(),
                   "SELECT pattern_id, delta_id FROM pattern_deltas ORDER BY pattern_id, position");
  while (member.step()) {
    auto it = index.find(member.integer(0));
    if (it == index.end()) throw ConfigError("database membership references unknown pattern");
    patterns[it->second].delta_ids.push_back(member.integer(1));
  }

  // The joined text columns are for people browsing the database; the
  // statement table is authoritative.
  for (auto& p : patterns) {
    p.before_text.clear();
    p.after_text.clear();
    if (p.delta_ids.empty()) continue;
    auto first = p.delta_ids.front();
    if (first < 1 || static_cast<std::size_t>(first) > deltas.size()) continue;
    const auto& d = deltas[static_cast<std::size_t>(first - 1)];
    for (const auto& s : d.before) p.before_text.push_back(s.normalized_text);
    for (const auto& s : d.after) p.after_text.push_back(s.normalized_text);
  }

  try {
    return PatternStore(std::move(commits), std::move(deltas), std::move(patterns));
  } catch (const IntegrityError& e) {
    throw ConfigError("corrupt database " + path.string() + ": " + e.what());
  }
}

}  // namespace patmine
