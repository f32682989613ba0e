#include "agdbg/server.hpp"

#include "fixtures.hpp"

#include <doctest.h>
#include <httplib.h>

#include <thread>

using namespace agdbg;
using namespace agdbg::testing;

namespace {

// A server on an ephemeral port, stopped on destruction.
struct LiveServer {
  SessionManager sessions;
  Server server{sessions};
  int port = -1;
  std::thread thread;

  LiveServer() {
    port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    thread = std::thread([this] { server.serve(); });
    server.wait_until_ready();
  }
  ~LiveServer() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

json body_of(const httplib::Result& r) {
  REQUIRE(r);
  return r->body.empty() ? json() : json::parse(r->body);
}

json new_session(const std::string& mode) {
  return {{"grammar", read_text(grammar_path("binfrac_buggy.ag"))},
          {"input", ".011"},
          {"mode", mode},
          {"symptom", "L.val@node6"}};
}

}  // namespace

TEST_SUITE("server") {
  TEST_CASE("request configuration") {
    json b = new_session("slice");
    b["firstCut"] = 4;
    b["strategy"] = "dq";
    b["refine"] = true;
    SessionConfig c = session_config_from_json(b);
    CHECK(c.mode == Mode::Slice);
    CHECK(c.first_cut == 4u);
    CHECK(c.strategy == Strategy::DivideAndQuery);
    CHECK(c.refine);
    CHECK(c.symptom == "L.val@node6");
    for (const char* key : {"grammar", "input"}) {
      json missing = new_session("slice");
      missing.erase(key);
      CHECK_THROWS_AS(session_config_from_json(missing), SessionError);
    }
    json golden = new_session("slice");
    golden["oracle"] = "golden";
    CHECK_THROWS_AS(session_config_from_json(golden), SessionError);
    CHECK_THROWS_AS(session_config_from_json(json::array()), SessionError);
  }

  TEST_CASE("a slice session over HTTP") {
    LiveServer live;
    auto cli = live.client();
    auto created = cli.Post("/sessions", new_session("slice").dump(), "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
    json c = body_of(created);
    std::string id = c["id"];
    CHECK(c["state"]["pendingQuery"]["query"]["instance"]["name"] == "B2.val");
    std::string base = "/sessions/" + id;

    auto q = cli.Get(base + "/query");
    CHECK(q->status == 200);
    CHECK(body_of(q)["seq"] == 0);

    auto stale = cli.Post(base + "/answer", json{{"seq", 3}, {"answer", "incorrect"}}.dump(),
                          "application/json");
    CHECK(stale->status == 409);
    CHECK(body_of(stale)["error"] == "stale answer: expected seq 0, got 3");

    auto bad = cli.Post(base + "/answer", json{{"seq", 0}, {"answer", "perhaps"}}.dump(),
                        "application/json");
    CHECK(bad->status == 400);
    auto garbage = cli.Post(base + "/answer", "{not json", "application/json");
    CHECK(garbage->status == 400);

    json state;
    std::uint64_t seq = 0;
    for (const char* a : {"incorrect", "correct", "incorrect"}) {
      auto r = cli.Post(base + "/answer", json{{"seq", seq++}, {"answer", a}}.dump(),
                        "application/json");
      REQUIRE(r->status == 200);
      state = body_of(r);
    }
    CHECK(state["finished"] == true);
    CHECK(state["diagnosis"]["certainty"] == "exact");
    CHECK(state["diagnosis"]["candidates"][0]["text"] == "B.pos = L0.pos + 1");
    CHECK(state["diagnosis"]["queriesAsked"] == 3);

    CHECK(cli.Get(base + "/query")->status == 409);
    auto snap = cli.Get(base);
    CHECK(snap->status == 200);
    CHECK(body_of(snap)["transcript"].size() == 3);

    auto undo = cli.Post(base + "/answer", json{{"seq", 3}, {"answer", "undo"}}.dump(),
                         "application/json");
    CHECK(undo->status == 200);
    CHECK(body_of(undo)["finished"] == false);

    CHECK(cli.Delete(base)->status == 204);
    CHECK(cli.Get(base)->status == 404);
    CHECK(cli.Delete(base)->status == 404);
    CHECK(body_of(cli.Get(base + "/query")).contains("error"));
  }

  TEST_CASE("creation errors") {
    LiveServer live;
    auto cli = live.client();
    json circ = new_session("algorithmic");
    circ["grammar"] =
        "attr syn s : rational on S, A;\nattr inh i : rational on A;\n"
        "S ::= A { A.i = A.s; S.s = A.s; }\nA ::= \"a\" { A.s = A.i; }\n";
    circ["input"] = "a";
    circ.erase("symptom");
    auto r = cli.Post("/sessions", circ.dump(), "application/json");
    CHECK(r->status == 422);
    json e = body_of(r);
    CHECK(e["detail"]["stage"] == "evaluate");
    CHECK(std::string(e["error"]).rfind("circularity: ", 0) == 0);

    json syntax = new_session("slice");
    syntax["grammar"] = "S ::= ";
    CHECK(cli.Post("/sessions", syntax.dump(), "application/json")->status == 422);
    json address = new_session("slice");
    address["symptom"] = "Q.val@node6";
    CHECK(cli.Post("/sessions", address.dump(), "application/json")->status == 400);
    CHECK(cli.Post("/sessions", "[]", "application/json")->status == 400);
    CHECK(cli.Get("/sessions/00ff/query")->status == 404);
    auto pre = cli.Options("/sessions");
    CHECK(pre->status == 204);
    CHECK(pre->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
    CHECK(live.sessions.size() == 0);
  }

  TEST_CASE("parallel sessions") {
    LiveServer live;
    std::vector<std::thread> threads;
    std::atomic<int> ok{0};
    for (int t = 0; t < 4; ++t)
      threads.emplace_back([&] {
        auto cli = live.client();
        auto created = cli.Post("/sessions", new_session("algorithmic").dump(), "application/json");
        if (!created || created->status != 201) return;
        std::string base = "/sessions/" + json::parse(created->body)["id"].get<std::string>();
        std::uint64_t seq = 0;
        json st;
        for (const char* a : {"incorrect", "correct", "correct"}) {
          auto r = cli.Post(base + "/answer", json{{"seq", seq++}, {"answer", a}}.dump(),
                            "application/json");
          if (!r || r->status != 200) return;
          st = json::parse(r->body);
        }
        if (st["finished"] == true && st["diagnosis"]["candidates"].size() == 3) ++ok;
      });
    for (std::thread& t : threads) t.join();
    CHECK(ok == 4);
    CHECK(live.sessions.size() == 4);
  }
}
