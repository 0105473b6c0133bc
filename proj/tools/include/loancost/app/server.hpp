#pragma once

#include <map>
#include <ostream>
#include <string>

namespace httplib {
class Server;
}

namespace loancost::app {

struct ServerOptions {
    std::string bind = "127.0.0.1";
    int port = 8080;            ///< 0 picks a free port
    std::string static_dir;     ///< mounted at / when set
    std::string cors_origin = "*";
};

struct ServiceResponse {
    int status;
    std::string body;
};

/// Maximum cost evaluations a single sweep request may trigger.
inline constexpr double kMaxSweepEvaluations = 1e6;

/// Transport-independent request handling; the HTTP routes are thin wrappers around this.
[[nodiscard]] ServiceResponse handle_request(const std::string& method, const std::string& path,
                                             const std::string& body,
                                             const std::multimap<std::string, std::string>& query = {});

/// Registers /v1 routes, CORS headers and the optional static mount.
void install_routes(httplib::Server& server, const ServerOptions& options);

/// Serves until SIGINT or SIGTERM, then returns 0.
int run_server(const ServerOptions& options, std::ostream& log);

}  // namespace loancost::app
