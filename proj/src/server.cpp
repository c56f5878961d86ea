#include <httplib.h>

#include "rtopmap/server.hpp"

#include <charconv>
#include <regex>

#include <spdlog/spdlog.h>

namespace rtopmap {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json; charset=utf-8";

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, std::string_view error, std::string_view detail) {
    send_json(res, {{"error", error}, {"detail", detail}}, status);
}

struct BadRequest : Error {
    using Error::Error;
};

std::optional<long> parse_int(std::string_view s) {
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string required(const httplib::Request& req, const char* name) {
    if (!req.has_param(name) || req.get_param_value(name).empty())
        throw BadRequest(std::string("missing parameter '") + name + "'");
    return req.get_param_value(name);
}

BaseSet base_param(const httplib::Request& req, BaseSet fallback) {
    if (!req.has_param("base")) return fallback;
    auto b = parse_base_set(req.get_param_value("base"));
    if (!b) throw BadRequest("base must be WORLD, US or EU");
    return *b;
}

std::string fetch_url(const std::string& url, const ServerOptions& opts) {
    static const std::regex re(R"(^(https?://[^/?#]+)([^#]*)$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(url, m, re)) throw BadRequest("url must be an absolute http(s) URL");
    httplib::Client cli(m[1].str());
    cli.set_follow_location(true);
    cli.set_connection_timeout(opts.fetch_timeout_seconds, 0);
    cli.set_read_timeout(opts.fetch_timeout_seconds, 0);
    std::string path = m[2].str().empty() ? "/" : m[2].str();
    std::string body;
    auto res = cli.Get(path, [&](const char* data, std::size_t n) {
        body.append(data, n);
        return body.size() <= opts.max_document_bytes;
    });
    if (!res) throw Error("fetch failed: " + httplib::to_string(res.error()));
    if (res->status != 200) throw Error("fetch failed: HTTP " + std::to_string(res->status));
    return body;
}

}  // namespace

struct Server::Impl {
    const MapBundle& bundle;
    ServerOptions opts;
    httplib::Server http;
    int bound_port = -1;

    Impl(const MapBundle& b, ServerOptions o) : bundle(b), opts(std::move(o)) { routes(); }

    template <typename F>
    httplib::Server::Handler guarded(F f) {
        return [f](const httplib::Request& req, httplib::Response& res) {
            try {
                f(req, res);
            } catch (const BadRequest& e) {
                send_error(res, 400, "bad_request", e.what());
            } catch (const NotFoundError& e) {
                send_error(res, 404, "not_found", e.what());
            } catch (const InvalidArgument& e) {
                send_error(res, 400, "bad_request", e.what());
            } catch (const std::exception& e) {
                spdlog::error("{} {}: {}", req.method, req.path, e.what());
                send_error(res, 502, "upstream_error", e.what());
            }
        };
    }

    void routes() {
        http.Get("/api/manifest", guarded([this](const auto&, auto& res) {
                     res.set_content(bundle.manifest_text(), kJson);
                 }));
        http.Get(R"(/api/levels/([^/]+))", guarded([this](const auto& req, auto& res) {
                     auto z = parse_int(req.matches[1].str());
                     if (!z) throw BadRequest("level must be an integer");
                     if (*z < 1 || *z > kLevelCount) throw NotFoundError("no level " + req.matches[1].str());
                     res.set_content(bundle.level_text(static_cast<int>(*z)), kJson);
                 }));
        http.Get("/api/countries", guarded([this](const auto&, auto& res) {
                     res.set_content(bundle.geometry_text(), kJson);
                 }));
        http.Get("/api/search", guarded([this](const auto& req, auto& res) {
                     std::size_t limit = 20;
                     if (req.has_param("limit")) {
                         auto l = parse_int(req.get_param_value("limit"));
                         if (!l || *l < 0) throw BadRequest("limit must be a non-negative integer");
                         limit = static_cast<std::size_t>(*l);
                     }
                     auto q = req.has_param("q") ? req.get_param_value("q") : std::string();
                     send_json(res, search_to_json(bundle.search(q, limit)));
                 }));
        http.Get(R"(/api/node/([^/]+))", guarded([this](const auto& req, auto& res) {
                     auto id = TopicId::parse(req.matches[1].str());
                     if (!id) throw NotFoundError("unknown topic " + req.matches[1].str());
                     send_json(res, node_info_to_json(bundle.node_info(*id)));
                 }));
        http.Get("/api/overlay/citations", guarded([this](const auto& req, auto& res) {
                     auto uni = required(req, "university");
                     auto mode = parse_citation_mode(req.has_param("mode") ? req.get_param_value("mode") : "full");
                     if (!mode) throw BadRequest("mode must be full or split");
                     auto norm = parse_normalize_mode(req.has_param("normalize") ? req.get_param_value("normalize") : "none");
                     if (!norm) throw BadRequest("normalize must be none, rate or literal");
                     auto base = base_param(req, bundle.variant());
                     auto r = normalized_citations_overlay(bundle.corpus(), uni, base, *norm, *mode);
                     send_json(res, overlay_to_json(r));
                 }));
        http.Get("/api/overlay/hr", guarded([this](const auto& req, auto& res) {
                     auto uni = required(req, "university");
                     auto r = hr_overlay(bundle.corpus(), uni, base_param(req, bundle.variant()));
                     send_json(res, overlay_to_json(r));
                 }));
        http.Get("/api/overlay/department", guarded([this](const auto& req, auto& res) {
                     send_json(res, overlay_to_json(department_overlay(bundle.corpus(), required(req, "keyword"))));
                 }));
        http.Post("/api/overlay/document", guarded([this](const auto& req, auto& res) {
                      json body;
                      try {
                          body = json::parse(req.body);
                      } catch (const json::exception&) {
                          throw BadRequest("body must be a JSON object with 'text' or 'url'");
                      }
                      std::string text;
                      if (body.is_object() && body.contains("text") && body["text"].is_string()) {
                          text = body["text"].get<std::string>();
                      } else if (body.is_object() && body.contains("url") && body["url"].is_string()) {
                          text = fetch_url(body["url"].get<std::string>(), opts);
                      } else {
                          throw BadRequest("body must be a JSON object with 'text' or 'url'");
                      }
                      if (text.size() > opts.max_document_bytes) throw BadRequest("document too large");
                      send_json(res, overlay_to_json(document_overlay(text, bundle.lexicon())));
                  }));
        http.Get("/api/universities", guarded([this](const auto&, auto& res) {
                     std::map<std::string, std::size_t> counts;
                     for (const auto& p : bundle.corpus().profiles) ++counts[p.university_id];
                     json list = json::array();
                     for (const auto& u : bundle.corpus().universities) {
                         json entry{{"id", u.id}, {"name", u.name}, {"region", to_string(u.region)},
                                    {"researchers", counts[u.id]}};
                         if (u.academic_staff) entry["staff"] = *u.academic_staff;
                         list.push_back(std::move(entry));
                     }
                     send_json(res, list);
                 }));
        if (opts.static_dir) http.set_mount_point("/", opts.static_dir->string());
        http.set_payload_max_length(opts.max_document_bytes + 4096);
        // The library default adds SO_REUSEPORT, which lets a second server
        // share a busy port without any error.
        http.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
        });
        http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty()) send_error(res, res.status, res.status == 404 ? "not_found" : "error", "no such route");
        });
    }
};

Server::Server(const MapBundle& bundle, ServerOptions opts) : impl_(std::make_unique<Impl>(bundle, std::move(opts))) {}

Server::~Server() { stop(); }

int Server::bind() {
    auto& i = *impl_;
    if (i.opts.port == 0) {
        i.bound_port = i.http.bind_to_any_port(i.opts.host);
    } else if (i.http.bind_to_port(i.opts.host, i.opts.port)) {
        i.bound_port = i.opts.port;
    }
    if (i.bound_port <= 0)
        throw Error("cannot listen on " + i.opts.host + ":" + std::to_string(i.opts.port) + " (port busy?)");
    return i.bound_port;
}

void Server::listen() {
    if (impl_->bound_port <= 0) bind();
    impl_->http.listen_after_bind();
}

void Server::stop() {
    if (impl_) impl_->http.stop();
}

bool Server::running() const { return impl_->http.is_running(); }

}  // namespace rtopmap
