#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "xwacoda/store.hpp"

namespace xwacoda {

struct ServerOptions {
  /// Served under "/"; a placeholder page is served when absent.
  std::optional<std::filesystem::path> assets;
  /// One "METHOD path status" line per request.
  std::optional<std::filesystem::path> request_log;
};

/// HTTP front end over an immutable store. Requests never modify the store
/// or the files it was loaded from.
class Server {
 public:
  explicit Server(const WarehouseStore& store, ServerOptions options = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the bound
  /// port or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(); requires a successful bind().
  bool listen();
  /// Blocks until listen() is accepting connections.
  void wait_until_ready() const;
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace xwacoda
