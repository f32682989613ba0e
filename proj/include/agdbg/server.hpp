// HTTP front end of the session service.
#pragma once

#include "agdbg/session.hpp"

#include <memory>
#include <string>

namespace agdbg {

/// POST /sessions, GET /sessions/{id}, GET /sessions/{id}/query,
/// POST /sessions/{id}/answer, DELETE /sessions/{id}. Bodies are JSON;
/// failures answer {"error", "detail"} with a 4xx status.
class Server {
 public:
  explicit Server(SessionManager& sessions);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds without serving. Port 0 picks a free port. Returns the bound
  /// port, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  bool serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// `SessionConfig` from a POST /sessions body. Throws SessionError.
SessionConfig session_config_from_json(const json& body);

}  // namespace agdbg
