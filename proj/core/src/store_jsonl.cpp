#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "patmine/error.hpp"
#include "patmine/pattern_store.hpp"

namespace patmine {

using nlohmann::json;

namespace {

json statement_json(const NormalizedStatement& s) {
  return {{"digest", s.digest.hex()},
          {"first_line", s.line_span.first},
          {"last_line", s.line_span.last},
          {"text", s.normalized_text}};
}

json span_json(const std::optional<LineSpan>& span) {
  if (!span) return nullptr;
  return json::array({span->first, span->last});
}

json commit_json(const CommitRecord& c) {
  return {{"record", "commit"},       {"id", c.id},
          {"parent", c.parent},       {"author", c.author},
          {"timestamp", c.timestamp}, {"log_message", c.log_message},
          {"is_bugfix", c.is_bugfix}};
}

json delta_json(DeltaId id, const CodeDelta& d) {
  json before = json::array(), after = json::array();
  for (const auto& s : d.before) before.push_back(statement_json(s));
  for (const auto& s : d.after) after.push_back(statement_json(s));
  auto key = DeltaKey::of(d);
  return {{"record", "delta"},
          {"id", id},
          {"commit_id", d.commit_id},
          {"path", d.path},
          {"kind", std::string(to_string(d.kind))},
          {"before_key", key.before_key},
          {"after_key", key.after_key},
          {"before", std::move(before)},
          {"after", std::move(after)},
          {"before_line_span", span_json(d.before_line_span)},
          {"after_line_span", span_json(d.after_line_span)}};
}

json pattern_json(const ChangePattern& p) {
  const auto& m = p.metrics;
  return {{"record", "pattern"},
          {"id", p.id},
          {"before_key", p.before_key},
          {"after_key", p.after_key},
          {"before_text", p.before_text},
          {"after_text", p.after_text},
          {"delta_ids", p.delta_ids},
          {"metrics",
           {{"size", m.size},
            {"files", m.files},
            {"commits", m.commits},
            {"authors", m.authors},
            {"support", m.support},
            {"matched", m.matched}}}};
}

NormalizedStatement statement_from(const json& j) {
  NormalizedStatement s;
  s.normalized_text = j.at("text").get<std::string>();
  auto digest = Digest::from_hex(j.at("digest").get<std::string>());
  if (!digest) throw std::invalid_argument("malformed digest");
  s.digest = *digest;
  s.line_span = {j.at("first_line").get<std::uint32_t>(), j.at("last_line").get<std::uint32_t>()};
  return s;
}

std::optional<LineSpan> span_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("malformed line span");
  return LineSpan{j[0].get<std::uint32_t>(), j[1].get<std::uint32_t>()};
}

}  // namespace

void export_jsonl(const PatternStore& store, std::ostream& out) {
  auto write = [&out](const json& j) {
    out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  };
  for (const auto& c : store.commits()) write(commit_json(c));
  DeltaId id = 1;
  for (const auto& d : store.deltas()) write(delta_json(id++, d));
  for (const auto& p : store.patterns()) write(pattern_json(p));
}

PatternStore import_jsonl(std::istream& in) {
  std::vector<CommitRecord> commits;
  std::vector<CodeDelta> deltas;
  std::vector<ChangePattern> patterns;

  std::string line;
  std::size_t line_no = 0;
  int phase = 0;  // commits, deltas, patterns must appear in this order
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      auto kind = j.at("record").get<std::string>();
      if (kind == "commit") {
        if (phase > 0) throw std::invalid_argument("commit record after deltas or patterns");
        CommitRecord c;
        c.id = j.at("id").get<std::string>();
        c.parent = j.at("parent").get<std::string>();
        c.author = j.at("author").get<std::string>();
        c.timestamp = j.at("timestamp").get<std::int64_t>();
        c.log_message = j.at("log_message").get<std::string>();
        c.is_bugfix = j.at("is_bugfix").get<bool>();
        commits.push_back(std::move(c));
      } else if (kind == "delta") {
        if (phase > 1) throw std::invalid_argument("delta record after patterns");
        phase = 1;
        if (j.at("id").get<DeltaId>() != static_cast<DeltaId>(deltas.size() + 1)) {
          throw std::invalid_argument("delta ids must be consecutive from 1");
        }
        CodeDelta d;
        d.commit_id = j.at("commit_id").get<std::string>();
        d.path = j.at("path").get<std::string>();
        auto delta_kind = delta_kind_from_string(j.at("kind").get<std::string>());
        if (!delta_kind) throw std::invalid_argument("unknown delta kind");
        d.kind = *delta_kind;
        for (const auto& s : j.at("before")) d.before.push_back(statement_from(s));
        for (const auto& s : j.at("after")) d.after.push_back(statement_from(s));
        d.before_line_span = span_from(j.at("before_line_span"));
        d.after_line_span = span_from(j.at("after_line_span"));
        auto key = DeltaKey::of(d);
        if (key.before_key != j.at("before_key").get<std::string>() ||
            key.after_key != j.at("after_key").get<std::string>()) {
          throw std::invalid_argument("delta keys do not match its statements");
        }
        deltas.push_back(std::move(d));
      } else if (kind == "pattern") {
        phase = 2;
        ChangePattern p;
        p.id = j.at("id").get<PatternId>();
        p.before_key = j.at("before_key").get<std::string>();
        p.after_key = j.at("after_key").get<std::string>();
        p.before_text = j.at("before_text").get<std::vector<std::string>>();
        p.after_text = j.at("after_text").get<std::vector<std::string>>();
        p.delta_ids = j.at("delta_ids").get<std::vector<DeltaId>>();
        const auto& m = j.at("metrics");
        p.metrics = {m.at("size").get<std::int64_t>(),    m.at("files").get<std::int64_t>(),
                     m.at("commits").get<std::int64_t>(), m.at("authors").get<std::int64_t>(),
                     m.at("support").get<std::int64_t>(), m.at("matched").get<std::int64_t>()};
        patterns.push_back(std::move(p));
      } else {
        throw std::invalid_argument("unknown record type '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw FormatError(line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw FormatError(line_no, e.what());
    }
  }
  try {
    return PatternStore(std::move(commits), std::move(deltas), std::move(patterns));
  } catch (const IntegrityError& e) {
    throw FormatError(0, std::string("inconsistent store: ") + e.what());
  }
}

}  // namespace patmine
