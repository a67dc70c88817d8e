#include "serve.hpp"

#include <charconv>
#include <map>

#include "patmine/error.hpp"

namespace patmine::cli {

namespace {

constexpr const char* kJson = "application/json; charset=utf-8";

void reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace), kJson);
}

std::map<std::string, std::string> query_of(const httplib::Request& req) {
  std::map<std::string, std::string> q;
  for (const auto& [k, v] : req.params) q.emplace(k, v);
  return q;
}

// Runs a handler, turning bad query parameters into 400s.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const ConfigError& e) {
      reply(res, 400, {{"error", e.what()}});
    }
  };
}

}  // namespace

void install_routes(httplib::Server& server, const TriageService& service) {
  server.Get("/api/files", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, 200, service.files(filter_from_query(query_of(req))));
  }));

  server.Get("/api/patterns",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               std::optional<std::string> file;
               if (req.has_param("file")) file = req.get_param_value("file");
               reply(res, 200, service.patterns(file, filter_from_query(query_of(req))));
             }));

  server.Get(R"(/api/patterns/(\d+)/changes)",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               const std::string text = req.matches[1];
               PatternId id = 0;
               std::from_chars(text.data(), text.data() + text.size(), id);
               if (auto body = service.changes(id)) {
                 reply(res, 200, *body);
               } else {
                 reply(res, 404, {{"error", "no pattern with id " + text}});
               }
             }));

  server.Get("/api/source", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    auto path = req.get_param_value("path");
    if (auto body = service.source(path)) {
      reply(res, 200, *body);
    } else {
      reply(res, 404, {{"error", "not a source file of the revision: " + path}});
    }
  }));
}

BindAddress parse_bind_address(const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos) throw ConfigError("bind address must be host:port");
  BindAddress addr;
  if (colon > 0) addr.host = text.substr(0, colon);
  auto port = text.substr(colon + 1);
  auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), addr.port);
  if (ec != std::errc{} || p != port.data() + port.size() || addr.port < 0 || addr.port > 65535) {
    throw ConfigError("invalid port in bind address '" + text + "'");
  }
  return addr;
}

}  // namespace patmine::cli
