// Debugging sessions: one grammar, one input, one engine, answered one
// query at a time. Sessions are replayable from their answer history.
#pragma once

#include "agdbg/debugger.hpp"
#include "agdbg/json_io.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace agdbg {

enum class Mode { Algorithmic, Slice };

const char* mode_name(Mode m);
Mode parse_mode(std::string_view s);  // throws std::invalid_argument

struct SessionConfig {
  std::string grammar_text;
  std::string input;
  Mode mode = Mode::Algorithmic;
  std::optional<std::string> symptom;  // instance address
  bool refine = false;
  Strategy strategy = Strategy::TopDown;
  std::optional<std::size_t> first_cut;
};

class SessionError : public std::runtime_error {
 public:
  enum class Code { BadRequest, NotFound, Conflict, Unprocessable };
  SessionError(Code code, const std::string& message, json detail = nullptr)
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}
  Code code() const { return code_; }
  const json& detail() const { return detail_; }
  int http_status() const;

 private:
  Code code_;
  json detail_;
};

/// Builds the attributed tree, mapping every failure to SessionError with
/// source positions in `detail`.
std::unique_ptr<AttributedTree> prepare_tree(const std::string& grammar_text,
                                             const std::string& input);

/// One-line question text, e.g.
/// "val = 1/4 given pos = 2 over input `11`".
std::string query_text(const AttributedTree& at, const Query& q);

class Session {
 public:
  /// Throws SessionError.
  Session(std::string id, SessionConfig config);

  const std::string& id() const { return id_; }
  const SessionConfig& config() const { return config_; }
  const AttributedTree& tree() const { return *at_; }
  const Debugger& engine() const { return *engine_; }
  InstanceId symptom() const { return symptom_; }
  /// Number of answers accepted so far; the next answer must carry it.
  std::uint64_t seq() const { return answers_.size(); }

  /// Accepts an answer (or "undo") carrying sequence number `seq`. Throws
  /// SessionError on stale sequence numbers, malformed answers or when the
  /// diagnosis is already final.
  void submit(std::uint64_t seq, const json& answer,
              std::optional<std::int64_t> timestamp_ms = std::nullopt);
  void submit(std::uint64_t seq, const Answer& answer,
              std::optional<std::int64_t> timestamp_ms = std::nullopt);
  void undo(std::uint64_t seq);

  /// {id, seq, query, text, value, premises, highlight, source, rules}.
  /// Throws SessionError(Conflict, "diagnosis ready") when finished.
  json query_payload() const;
  /// {seq, pendingQuery | diagnosis}
  json state() const;
  /// Everything the UI needs; timestamps can be left out for comparisons.
  json snapshot(bool with_timestamps = true) const;

  json save() const;
  /// Recreates a session and replays its answers. Throws SessionError.
  static std::unique_ptr<Session> load(std::string id, const json& saved);

 private:
  void rebuild();

  std::string id_;
  SessionConfig config_;
  std::unique_ptr<AttributedTree> at_;
  InstanceId symptom_ = 0;
  std::unique_ptr<Debugger> engine_;
  std::vector<std::pair<Answer, std::int64_t>> answers_;
};

/// Thread-safe registry. Each session is serialized by its own mutex.
class SessionManager {
 public:
  /// Returns the new id.
  std::string create(SessionConfig config);
  /// Runs `fn` with the session locked. Throws SessionError(NotFound).
  template <typename Fn>
  auto with(const std::string& id, Fn&& fn) {
    std::shared_ptr<Entry> e = find(id);
    std::lock_guard<std::mutex> lock(e->mutex);
    return fn(*e->session);
  }
  void remove(const std::string& id);
  std::size_t size() const;

 private:
  struct Entry {
    std::mutex mutex;
    std::unique_ptr<Session> session;
  };
  std::shared_ptr<Entry> find(const std::string& id) const;
  std::string fresh_id();

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace agdbg
