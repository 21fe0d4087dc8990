#pragma once

#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace refstd {

/// Registers the /api routes and, when given, serves static files at /.
/// Returns false if the static directory cannot be mounted.
bool configure_routes(httplib::Server& server, const std::optional<std::string>& static_dir);

/// Port from REFSTD_PORT, falling back to 8080.
int default_port();

}  // namespace refstd
