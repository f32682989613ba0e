#include "agdbg/server.hpp"

#include <httplib.h>

namespace agdbg {

SessionConfig session_config_from_json(const json& body) {
  using Code = SessionError::Code;
  if (!body.is_object()) throw SessionError(Code::BadRequest, "request body must be a JSON object");
  SessionConfig c;
  try {
    c.grammar_text = body.at("grammar").get<std::string>();
    c.input = body.at("input").get<std::string>();
    c.mode = parse_mode(body.value("mode", "algorithmic"));
    if (body.contains("symptom") && !body.at("symptom").is_null())
      c.symptom = body.at("symptom").get<std::string>();
    c.refine = body.value("refine", false);
    std::string strategy = body.value("strategy", "top-down");
    if (strategy == "dq")
      c.strategy = Strategy::DivideAndQuery;
    else if (strategy != "top-down")
      throw std::invalid_argument("unknown strategy '" + strategy + "'");
    if (body.contains("firstCut")) c.first_cut = body.at("firstCut").get<std::size_t>();
    if (body.value("oracle", "interactive") != "interactive")
      throw std::invalid_argument("the service supports only the interactive oracle");
  } catch (const json::exception& e) {
    throw SessionError(Code::BadRequest, std::string("malformed request: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SessionError(Code::BadRequest, e.what());
  }
  return c;
}

struct Server::Impl {
  SessionManager& sessions;
  httplib::Server http;

  explicit Impl(SessionManager& s) : sessions(s) { routes(); }

  static void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  template <typename Fn>
  static void guarded(httplib::Response& res, Fn&& fn) {
    try {
      fn();
    } catch (const SessionError& e) {
      send(res, e.http_status(), {{"error", e.what()}, {"detail", e.detail()}});
    } catch (const json::exception& e) {
      send(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}, {"detail", nullptr}});
    } catch (const std::exception& e) {
      send(res, 500, {{"error", e.what()}, {"detail", nullptr}});
    }
  }

  void routes() {
    http.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    http.Options(R"(/sessions.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    http.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        SessionConfig c = session_config_from_json(json::parse(req.body));
        std::string id = sessions.create(std::move(c));
        json state = sessions.with(id, [](Session& s) { return s.state(); });
        send(res, 201, {{"id", id}, {"state", std::move(state)}});
      });
    });
    http.Get(R"(/sessions/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        send(res, 200, sessions.with(req.matches[1], [](Session& s) { return s.snapshot(); }));
      });
    });
    http.Get(R"(/sessions/([0-9a-f]+)/query)",
             [this](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 send(res, 200,
                      sessions.with(req.matches[1], [](Session& s) { return s.query_payload(); }));
               });
             });
    http.Post(R"(/sessions/([0-9a-f]+)/answer)",
              [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  json body = json::parse(req.body);
                  if (!body.is_object() || !body.contains("seq") || !body.contains("answer"))
                    throw SessionError(SessionError::Code::BadRequest,
                                       "answer body needs seq and answer");
                  auto seq = body.at("seq").get<std::uint64_t>();
                  send(res, 200, sessions.with(req.matches[1], [&](Session& s) {
                    s.submit(seq, body.at("answer"));
                    return s.state();
                  }));
                });
              });
    http.Delete(R"(/sessions/([0-9a-f]+))",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] {
                    sessions.remove(req.matches[1]);
                    res.status = 204;
                  });
                });
  }
};

Server::Server(SessionManager& sessions) : impl_(std::make_unique<Impl>(sessions)) {}
Server::~Server() = default;

int Server::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool Server::serve() { return impl_->http.listen_after_bind(); }
void Server::stop() { impl_->http.stop(); }
void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace agdbg
