#include "refstd/http_server.hpp"

#include <cstdlib>

#include <httplib.h>

#include "refstd/service.hpp"

namespace refstd {

namespace {

void send(httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
}

template <ServiceResponse (*Handler)(std::string_view)>
void post(const httplib::Request& req, httplib::Response& res) {
    send(res, Handler(req.body));
}

}  // namespace

bool configure_routes(httplib::Server& server, const std::optional<std::string>& static_dir) {
    server.Post("/api/compute", post<handle_compute>);
    server.Post("/api/sweep", post<handle_sweep>);
    server.Post("/api/bounds", post<handle_bounds>);
    server.Post("/api/crossovers", post<handle_crossovers>);
    server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) { send(res, handle_health()); });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(dump_json(to_json(Error(ErrorCode::BadRequest, what))), "application/json");
    });
    if (static_dir) return server.set_mount_point("/", *static_dir);
    return true;
}

int default_port() {
    if (const char* env = std::getenv("REFSTD_PORT")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
    }
    return 8080;
}

}  // namespace refstd
