#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "rtopmap/bundle.hpp"

namespace rtopmap {

struct ServerOptions {
    std::string host = "127.0.0.1";
    // 0 picks a free port.
    int port = 8080;
    // Static client assets served under "/".
    std::optional<std::filesystem::path> static_dir;
    std::size_t max_document_bytes = 8u << 20;
    int fetch_timeout_seconds = 10;
};

// HTTP front end over a loaded bundle. The bundle must outlive the server.
class Server {
public:
    explicit Server(const MapBundle& bundle, ServerOptions opts = {});
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Binds the listening socket; throws Error if the port is unavailable.
    // Returns the bound port.
    int bind();
    // Serves until stop() is called.
    void listen();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace rtopmap
