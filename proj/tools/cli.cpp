#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "patmine/error.hpp"
#include "patmine/matcher.hpp"
#include "patmine/pipeline.hpp"
#include "patmine/psbp_filter.hpp"
#include "patmine/triage_service.hpp"
#include "serve.hpp"

namespace patmine::cli {

namespace {

struct MineArgs {
  std::string repo, branch = "HEAD", since, issues, issue_regex, db;
  std::vector<std::string> extensions{".java"};
  unsigned threads = 0;
  bool json = false;
};

struct MatchArgs {
  std::string db, revision;
  std::vector<std::string> extensions{".java"};
  std::string log_keyword, path_keyword, exclude_path;
  std::int64_t max_matches = 0;
  bool ignore_case = false, json = false, fail_on_match = false;
  unsigned threads = 0;
};

struct ExportArgs {
  std::string db, output;
};

struct ImportArgs {
  std::string db, input = "-";
};

struct ServeArgs {
  std::string db, revision, bind = "127.0.0.1:8080";
  std::vector<std::string> extensions{".java"};
};

std::string join(const std::vector<std::string>& lines, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += sep;
    out += lines[i];
  }
  return out;
}

int cmd_mine(const MineArgs& a, std::ostream& out, std::ostream& err) {
  MineConfig config;
  config.repo = a.repo;
  config.branch = a.branch;
  if (!a.since.empty()) config.since = parse_date(a.since);
  if (!a.issues.empty()) config.issue_file = a.issues;
  if (!a.issue_regex.empty()) config.issue_regex = a.issue_regex;
  config.sources.extensions = a.extensions;
  config.threads = a.threads;

  auto [store, summary] = mine(config);
  save_sqlite(store, a.db);
  for (const auto& w : summary.warnings) err << "warning: " << w << '\n';

  std::vector<const ChangePattern*> top;
  for (const auto& p : store.patterns()) {
    if (!p.is_addition()) top.push_back(&p);
  }
  std::stable_sort(top.begin(), top.end(), [](const ChangePattern* x, const ChangePattern* y) {
    return x->metrics.support > y->metrics.support;
  });
  if (top.size() > 10) top.resize(10);

  if (a.json) {
    nlohmann::json j{{"commits", summary.commits},
                     {"bugfix_commits", summary.bugfix_commits},
                     {"file_changes", summary.file_changes},
                     {"deltas", summary.deltas},
                     {"patterns", summary.patterns},
                     {"patterns_condition_1", summary.patterns_condition_1},
                     {"psbps", summary.psbps}};
    nlohmann::json list = nlohmann::json::array();
    for (const auto* p : top) {
      list.push_back({{"id", p->id},
                      {"before_text", p->before_text},
                      {"after_text", p->after_text},
                      {"metrics", to_json(p->metrics)}});
    }
    j["top_patterns"] = std::move(list);
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    return kExitOk;
  }

  auto row = [&out](std::string_view label, std::size_t value) {
    out << std::left << std::setw(28) << label << value << '\n';
  };
  row("commits", summary.commits);
  row("bug-fix commits", summary.bugfix_commits);
  row("changed source files", summary.file_changes);
  row("code deltas", summary.deltas);
  row("change patterns", summary.patterns);
  row("patterns satisfying (a)", summary.patterns_condition_1);
  row("patterns satisfying (a)+(b)", summary.psbps);
  if (!top.empty()) {
    out << "\nmost frequent change patterns\n";
    out << "    id  SIZE FILES COMMITS AUTHORS SUPPORT  before -> after\n";
    for (const auto* p : top) {
      const auto& m = p->metrics;
      out << std::right << std::setw(6) << p->id << std::setw(6) << m.size << std::setw(6)
          << m.files << std::setw(8) << m.commits << std::setw(8) << m.authors << std::setw(8)
          << m.support << "  " << join(p->before_text, " | ") << " -> "
          << join(p->after_text, " | ") << '\n';
    }
  }
  return kExitOk;
}

int cmd_match(const MatchArgs& a, std::ostream& out, std::ostream& err) {
  auto store = load_sqlite(a.db);
  auto psbps = extract_psbps(store);
  SourceFilter sources{a.extensions};
  Diagnostics diags;
  auto files = load_revision(a.revision, sources, {}, &diags, a.threads);
  for (const auto& d : diags) err << "warning: " << d << '\n';
  auto results = match_revision(store, psbps, files, a.threads);

  TriageFilter filter;
  if (!a.log_keyword.empty()) filter.log_keyword = a.log_keyword;
  if (!a.path_keyword.empty()) filter.path_keyword = a.path_keyword;
  if (!a.exclude_path.empty()) filter.exclude_path = a.exclude_path;
  if (a.max_matches > 0) filter.max_matches = a.max_matches;
  filter.ignore_case = a.ignore_case;
  auto kept = apply_filters(results, store, filter);

  if (a.json) {
    for (const auto& r : kept) {
      out << to_json(r).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }
  } else {
    out << "PSBP  MATCHED  SUPPORT  LOCATION  ->  SUGGESTED CHANGE\n";
    for (const auto& r : kept) {
      const auto& m = store.pattern(r.psbp_id).metrics;
      out << std::right << std::setw(4) << r.psbp_id << std::setw(9) << m.matched
          << std::setw(9) << m.support << "  " << r.path << ':' << r.line_span.first;
      if (r.line_span.last != r.line_span.first) out << '-' << r.line_span.last;
      out << "  ->  " << join(r.suggested_after_text, " | ") << '\n';
    }
    err << kept.size() << " match(es) from " << psbps.size() << " PSBP(s) over " << files.size()
        << " file(s)\n";
  }
  return a.fail_on_match && !kept.empty() ? kExitMatchesFound : kExitOk;
}

int cmd_export(const ExportArgs& a, std::ostream& out) {
  auto store = load_sqlite(a.db);
  if (a.output.empty() || a.output == "-") {
    export_jsonl(store, out);
  } else {
    std::ofstream file(a.output, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + a.output);
    export_jsonl(store, file);
  }
  return kExitOk;
}

int cmd_import(const ImportArgs& a, std::ostream& err) {
  PatternStore store;
  if (a.input == "-") {
    store = import_jsonl(std::cin);
  } else {
    std::ifstream file(a.input, std::ios::binary);
    if (!file) throw ConfigError("cannot read " + a.input);
    store = import_jsonl(file);
  }
  save_sqlite(store, a.db);
  err << "imported " << store.commits().size() << " commits, " << store.deltas().size()
      << " deltas, " << store.patterns().size() << " patterns\n";
  return kExitOk;
}

int cmd_serve(const ServeArgs& a, std::ostream& err) {
  auto addr = parse_bind_address(a.bind);
  TriageService service(load_sqlite(a.db), a.revision, SourceFilter{a.extensions});
  httplib::Server server;
  // httplib's default also sets SO_REUSEPORT, which would let two servers share a port.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  install_routes(server, service);
  if (!server.bind_to_port(addr.host, addr.port)) {
    err << "error: cannot bind " << a.bind << '\n';
    return kExitUsage;
  }
  err << "serving " << service.psbps().size() << " PSBP(s), " << service.results().size()
      << " match(es) on http://" << addr.host << ':' << addr.port << "/api/files\n";
  server.listen_after_bind();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mine project-specific bug patterns from history and match them against a revision",
               "patmine"};
  app.require_subcommand(1);

  MineArgs mine_args;
  auto* mine_cmd = app.add_subcommand("mine", "Mine change patterns from a repository into a database");
  mine_cmd->add_option("--repo", mine_args.repo, "Local clone")->required();
  mine_cmd->add_option("--branch", mine_args.branch, "Branch or revision to walk (first parent)")
      ->capture_default_str();
  mine_cmd->add_option("--since", mine_args.since, "Skip commits before YYYY-MM-DD");
  auto* issues = mine_cmd->add_option("--issues", mine_args.issues,
                                      "File of bug issue IDs, one per line");
  auto* regex = mine_cmd->add_option("--issue-regex", mine_args.issue_regex,
                                     "Regex that marks a commit log as a bug fix");
  issues->excludes(regex);
  mine_cmd->add_option("--ext", mine_args.extensions, "Source file extensions")
      ->capture_default_str();
  mine_cmd->add_option("--db", mine_args.db, "Output database")->required();
  mine_cmd->add_option("--threads", mine_args.threads, "Worker threads (0 = all cores)");
  mine_cmd->add_flag("--json", mine_args.json, "Print the summary as JSON");

  MatchArgs match_args;
  auto* match_cmd = app.add_subcommand("match", "Match PSBPs against a source tree");
  match_cmd->add_option("--db", match_args.db, "Pattern database")->required();
  match_cmd->add_option("--revision", match_args.revision, "Checked-out target revision")
      ->required();
  match_cmd->add_option("--ext", match_args.extensions, "Source file extensions")
      ->capture_default_str();
  match_cmd->add_option("--log-keyword", match_args.log_keyword,
                        "Keep PSBPs with a commit log containing this text");
  match_cmd->add_option("--max-matches", match_args.max_matches,
                        "Keep PSBPs matched at most this many times")
      ->check(CLI::PositiveNumber);
  match_cmd->add_option("--path-keyword", match_args.path_keyword,
                        "Keep matches whose path contains this text");
  match_cmd->add_option("--exclude-path", match_args.exclude_path,
                        "Drop matches whose path contains this text");
  match_cmd->add_flag("--ignore-case", match_args.ignore_case, "Case-insensitive keywords");
  match_cmd->add_flag("--json", match_args.json, "One JSON object per match");
  match_cmd->add_flag("--fail-on-match", match_args.fail_on_match, "Exit 1 when anything matches");
  match_cmd->add_option("--threads", match_args.threads, "Worker threads (0 = all cores)");

  ExportArgs export_args;
  auto* export_cmd = app.add_subcommand("export", "Write the database as JSON Lines");
  export_cmd->add_option("--db", export_args.db, "Pattern database")->required();
  export_cmd->add_option("-o,--output", export_args.output, "Output file (default stdout)");

  ImportArgs import_args;
  auto* import_cmd = app.add_subcommand("import", "Build a database from JSON Lines");
  import_cmd->add_option("--db", import_args.db, "Database to create")->required();
  import_cmd->add_option("input", import_args.input, "JSONL file, - for stdin")
      ->capture_default_str();

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the triage JSON API");
  serve_cmd->add_option("--db", serve_args.db, "Pattern database")->required();
  serve_cmd->add_option("--revision", serve_args.revision, "Checked-out target revision")
      ->required();
  serve_cmd->add_option("--bind", serve_args.bind, "host:port")->capture_default_str();
  serve_cmd->add_option("--ext", serve_args.extensions, "Source file extensions")
      ->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*mine_cmd) return cmd_mine(mine_args, out, err);
    if (*match_cmd) return cmd_match(match_args, out, err);
    if (*export_cmd) return cmd_export(export_args, out);
    if (*import_cmd) return cmd_import(import_args, err);
    if (*serve_cmd) return cmd_serve(serve_args, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const IntegrityError& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace patmine::cli
