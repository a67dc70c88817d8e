#pragma once

#include <httplib.h>

#include <string>

#include "patmine/triage_service.hpp"

namespace patmine::cli {

// Registers the GET /api/... routes on `server`. The service must outlive it.
void install_routes(httplib::Server& server, const TriageService& service);

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

// Parses "host:port" or ":port". Throws ConfigError.
BindAddress parse_bind_address(const std::string& text);

}  // namespace patmine::cli
