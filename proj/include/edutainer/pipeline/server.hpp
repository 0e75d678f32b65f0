#pragma once

#include "edutainer/pipeline/session.hpp"

#include <httplib.h>

#include <thread>

namespace edutainer {

// Local preview service around one Session.
//   GET  /api/state
//   POST /api/camera   {position, look_at, up, vfov, ...}
//   POST /api/palette  {structure_index, hue, opacity}
//   GET  /api/preview?filter=none|red|green|blue&view=composite|atlas|folded&rev=N
//   GET  /api/idmap?rev=N
//   POST /api/flatten  {triangles: [...]}
//   POST /api/undo
//   GET  /api/export
// Mutations answer {revision}; errors answer {error, field?} with 400, 409 or 422.
class PreviewServer {
public:
    explicit PreviewServer(Session& session) : session_(session) {
        // SO_REUSEADDR only: without SO_REUSEPORT a second instance cannot share the port.
        server_.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
        });
        routes();
    }
    ~PreviewServer() { stop(); }

    PreviewServer(const PreviewServer&) = delete;
    PreviewServer& operator=(const PreviewServer&) = delete;

    // Binds `port` (0 picks a free one) and serves on a background thread.
    // Returns the bound port. A busy port throws.
    int start(const std::string& host = "127.0.0.1", int port = 0) {
        port_ = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
        if (port_ < 0) throw Error("serve: cannot bind " + host + ":" + std::to_string(port) + " (port busy?)");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        return port_;
    }

    // Blocks until stop() is called from another thread.
    void run(const std::string& host, int port) {
        port_ = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
        if (port_ < 0) throw Error("serve: cannot bind " + host + ":" + std::to_string(port) + " (port busy?)");
        server_.listen_after_bind();
    }

    void stop() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    int port() const noexcept { return port_; }

private:
    static void send_json(httplib::Response& res, int status, const Json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    static void send_error(httplib::Response& res, int status, const std::string& msg, const std::string& field = {}) {
        Json body{{"error", msg}};
        if (!field.empty()) body["field"] = field;
        send_json(res, status, body);
    }

    static Json parse_body(const httplib::Request& req) {
        Json body = Json::parse(req.body);  // parse_error -> 400
        if (!body.is_object()) throw ConfigError("", "request body must be a JSON object");
        return body;
    }

    // Runs a handler and maps library errors to HTTP statuses.
    template <class F>
    auto guarded(F f) {
        return [this, f](const httplib::Request& req, httplib::Response& res) {
            try {
                f(req, res);
            } catch (const Json::exception& e) {
                send_error(res, 400, std::string("malformed JSON: ") + e.what());
            } catch (const ConfigError& e) {
                send_error(res, 422, e.what(), e.field());
            } catch (const DegenerateSelection& e) {
                send_error(res, 422, e.what());
            } catch (const InvalidArgument& e) {
                send_error(res, 422, e.what());
            } catch (const std::exception& e) {
                send_error(res, 500, e.what());
            }
            if (!res.has_header("X-Revision")) res.set_header("X-Revision", std::to_string(session_.revision()));
        };
    }

    // Optional rev=N: an outdated revision is a 404 so clients refetch state.
    static bool revision_matches(const httplib::Request& req, const SessionSnapshot& snap, httplib::Response& res) {
        if (!req.has_param("rev")) return true;
        const std::string r = req.get_param_value("rev");
        if (r == std::to_string(snap.revision())) return true;
        send_error(res, 404, "revision " + r + " is not current (current " + std::to_string(snap.revision()) + ")");
        return false;
    }

    void mutation_done(httplib::Response& res, long rev) { send_json(res, 200, Json{{"revision", rev}}); }

    void routes() {
        server_.Get("/api/state", guarded([this](const httplib::Request&, httplib::Response& res) {
                        send_json(res, 200, session_.snapshot()->state());
                    }));

        server_.Post("/api/camera", guarded([this](const httplib::Request& req, httplib::Response& res) {
                         mutation_done(res, session_.set_camera(parse_body(req)));
                     }));

        server_.Post("/api/palette", guarded([this](const httplib::Request& req, httplib::Response& res) {
                         const Json body = parse_body(req);
                         detail::reject_unknown(body, "", {"structure_index", "hue", "opacity"});
                         if (!body.contains("structure_index"))
                             throw ConfigError("structure_index", "is required");
                         const long long idx = detail::integer(body["structure_index"], "structure_index");
                         if (idx < 0) throw ConfigError("structure_index", "must be >= 0");
                         const Json state_structures = session_.snapshot()->state()["structures"];
                         if (static_cast<std::size_t>(idx) >= state_structures.size())
                             throw ConfigError("structure_index", "no structure " + std::to_string(idx));
                         const Json& cur = state_structures[idx];
                         std::string hue_name = cur["hue"].get<std::string>();
                         if (body.contains("hue")) {
                             if (!body["hue"].is_string()) throw ConfigError("hue", "must be a string");
                             hue_name = body["hue"].get<std::string>();
                         }
                         const auto hue = parse_hue(hue_name);
                         if (!hue) throw ConfigError("hue", "must be one of cyan, magenta, yellow");
                         const double opacity = body.contains("opacity") ? detail::number(body["opacity"], "opacity")
                                                                         : cur["opacity"].get<double>();
                         try {
                             mutation_done(res, session_.set_palette(static_cast<std::size_t>(idx), *hue, opacity));
                         } catch (const ConfigError& e) {
                             // Hue already used by another structure.
                             if (std::string(e.what()).find("duplicate") == std::string::npos) throw;
                             send_error(res, 409, e.what(), e.field());
                         }
                     }));

        server_.Get("/api/preview", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const auto snap = session_.snapshot();
                        if (!revision_matches(req, *snap, res)) return;
                        std::optional<FilterKind> filter;
                        const std::string f = req.has_param("filter") ? req.get_param_value("filter") : "none";
                        if (f != "none") {
                            filter = parse_filter(f);
                            if (!filter) throw ConfigError("filter", "must be none, red, green or blue");
                        }
                        PreviewView view = PreviewView::Composite;
                        if (req.has_param("view")) {
                            const auto v = parse_view(req.get_param_value("view"));
                            if (!v) throw ConfigError("view", "must be composite, atlas or folded");
                            view = *v;
                        }
                        res.set_header("X-Revision", std::to_string(snap->revision()));
                        res.set_content(snap->preview_png(view, filter), "image/png");
                    }));

        server_.Get("/api/idmap", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const auto snap = session_.snapshot();
                        if (!revision_matches(req, *snap, res)) return;
                        res.set_header("X-Revision", std::to_string(snap->revision()));
                        res.set_content(snap->idmap_png(), "image/png");
                    }));

        server_.Post("/api/flatten", guarded([this](const httplib::Request& req, httplib::Response& res) {
                         const Json body = parse_body(req);
                         detail::reject_unknown(body, "", {"triangles"});
                         if (!body.contains("triangles") || !body["triangles"].is_array())
                             throw ConfigError("triangles", "must be an array of triangle ids");
                         FlattenSelection sel;
                         for (std::size_t i = 0; i < body["triangles"].size(); ++i)
                             sel.triangle_ids.push_back(static_cast<int>(
                                 detail::integer(body["triangles"][i], "triangles[" + std::to_string(i) + "]")));
                         mutation_done(res, session_.flatten(sel));
                     }));

        server_.Post("/api/undo", guarded([this](const httplib::Request&, httplib::Response& res) {
                         try {
                             mutation_done(res, session_.undo());
                         } catch (const InvalidArgument& e) {
                             send_error(res, 409, e.what());
                         }
                     }));

        server_.Get("/api/export", guarded([this](const httplib::Request&, httplib::Response& res) {
                        res.set_header("Content-Disposition", "attachment; filename=\"papercraft.zip\"");
                        res.set_content(session_.export_zip(), "application/zip");
                    }));
    }

    Session& session_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = -1;
};

}  // namespace edutainer
