#include "agdbg/cli.hpp"

#include "agdbg/grammar_parser.hpp"
#include "agdbg/oracles.hpp"
#include "agdbg/server.hpp"
#include "agdbg/session.hpp"
#include "agdbg/validate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace agdbg {

namespace {

struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UserError("cannot write " + path);
  out << text;
}

std::string trim(std::string s) {
  auto sp = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), sp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), sp).base(), s.end());
  return s;
}

/// One answer line: y, n, u, undo, or `p [premise]`. Returns nullopt for an
/// unrecognized line; "undo" is reported through `undo`.
std::optional<Answer> parse_answer_line(const AttributedTree& at, const Query* q,
                                        const std::string& raw, bool& undo) {
  std::string line = trim(raw);
  undo = false;
  std::string word = line.substr(0, line.find(' '));
  std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) { return std::tolower(c); });
  std::string rest = word.size() < line.size() ? trim(line.substr(word.size())) : "";
  if (word == "y" || word == "yes" || word == "c" || word == "correct") return Answer::correct();
  if (word == "n" || word == "no" || word == "incorrect") return Answer::incorrect();
  if (word == "u" || word == "unknown" || word == "?") return Answer::unknown();
  if (word == "undo") {
    undo = true;
    return std::nullopt;
  }
  if (word == "p" || word == "premise" || word == "premisewrong") {
    if (!rest.empty()) {
      // A bare attribute name selects the premise of that name.
      if (q)
        if (const auto* sq = std::get_if<SynthQuery>(q))
          for (const auto& [id, v] : sq->premises)
            if (at.graph.instance(id).attr == rest) return Answer::premise_wrong(id);
      try {
        return Answer::premise_wrong(parse_instance_address(at, rest));
      } catch (const std::invalid_argument&) {
        return std::nullopt;
      }
    }
    if (q)
      if (const auto* sq = std::get_if<SynthQuery>(q))
        if (sq->premises.size() == 1) return Answer::premise_wrong(sq->premises.front().first);
    return std::nullopt;
  }
  return std::nullopt;
}

std::vector<Answer> load_script(const AttributedTree& at, const std::string& path) {
  std::string text = read_file(path);
  std::vector<Answer> out;
  std::string first = trim(text).substr(0, 1);
  if (first == "[" || first == "{") {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw UserError("malformed script " + path + ": " + e.what());
    }
    if (j.is_object()) j = j.contains("answers") ? j.at("answers") : j.value("transcript", json::array());
    for (const json& e : j) {
      const json& a = e.is_object() && e.contains("answer") ? e.at("answer") : e;
      try {
        out.push_back(answer_from_json(at, a));
      } catch (const std::invalid_argument& ex) {
        throw UserError("script " + path + ": " + ex.what());
      }
    }
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    ++n;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    bool undo = false;
    auto a = parse_answer_line(at, nullptr, line, undo);
    if (!a) throw UserError("script " + path + " line " + std::to_string(n) + ": cannot read '" + line + "'");
    out.push_back(*a);
  }
  return out;
}

void run_interactive(Session& s, std::istream& in, std::ostream& out) {
  while (!s.engine().finished()) {
    const Query& q = *s.engine().pending();
    out << query_text(s.tree(), q) << " \xE2\x80\x94 correct? [y/n/p(remise)/u(nknown)/undo] "
        << std::flush;
    std::string line;
    if (!std::getline(in, line)) throw OracleAborted("input ended before a diagnosis");
    std::string t = trim(line);
    if (t == "q" || t == "quit") throw OracleAborted("aborted by user");
    bool undo = false;
    auto a = parse_answer_line(s.tree(), &q, line, undo);
    try {
      if (undo) {
        s.undo(s.seq());
      } else if (a) {
        s.submit(s.seq(), *a);
      } else {
        out << "please answer y, n, p [premise], u or undo\n";
      }
    } catch (const SessionError& e) {
      if (e.code() == SessionError::Code::Unprocessable) throw;
      out << e.what() << "\n";
    }
  }
}

void run_oracle(Session& s, Oracle& oracle) {
  while (!s.engine().finished()) s.submit(s.seq(), oracle.answer(*s.engine().pending()));
}

struct DebugArgs {
  std::string grammar;
  std::string input;
  bool has_input = false;
  std::string mode = "algorithmic";
  std::string symptom;
  std::string oracle = "interactive";
  bool refine = false;
  std::string strategy = "top-down";
  std::size_t first_cut = 0;
  std::string save;
  std::string load;
  std::string transcript;
};

int run_debug(const DebugArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  std::unique_ptr<Session> s;
  if (!a.load.empty()) {
    json saved;
    try {
      saved = json::parse(read_file(a.load));
    } catch (const json::exception& e) {
      throw UserError("malformed session file " + a.load + ": " + e.what());
    }
    s = Session::load("cli", saved);
  } else {
    if (a.grammar.empty()) throw UserError("debug needs a grammar file or --load-session");
    if (!a.has_input) throw UserError("debug needs --input");
    SessionConfig c;
    c.grammar_text = read_file(a.grammar);
    c.input = a.input;
    try {
      c.mode = parse_mode(a.mode);
    } catch (const std::invalid_argument& e) {
      throw UserError(e.what());
    }
    if (!a.symptom.empty()) c.symptom = a.symptom;
    c.refine = a.refine;
    c.strategy = a.strategy == "dq" ? Strategy::DivideAndQuery : Strategy::TopDown;
    if (a.first_cut > 0) c.first_cut = a.first_cut;
    s = std::make_unique<Session>("cli", std::move(c));
  }

  auto save = [&] {
    if (!a.save.empty()) write_file(a.save, s->save().dump(2) + "\n");
  };
  try {
    if (a.oracle == "interactive") {
      run_interactive(*s, in, out);
    } else if (a.oracle.rfind("golden:", 0) == 0) {
      auto ref = std::make_shared<Grammar>();
      std::string path = a.oracle.substr(7);
      try {
        *ref = parse_grammar(read_file(path));
      } catch (const GrammarSyntaxError& e) {
        throw UserError(path + ": " + e.what());
      }
      GoldenOracle golden(ref, s->tree());
      if (s->config().mode == Mode::Slice && s->seq() == 0 &&
          !golden.confirms_symptom(make_value_query(s->tree(), s->symptom())))
        throw SymptomNotIncorrectError("symptom " + s->tree().instance_name(s->symptom()) +
                                       " is not incorrect");
      run_oracle(*s, golden);
    } else if (a.oracle.rfind("script:", 0) == 0) {
      ScriptedOracle scripted(load_script(s->tree(), a.oracle.substr(7)));
      run_oracle(*s, scripted);
    } else {
      throw UserError("unknown oracle '" + a.oracle + "'");
    }
  } catch (...) {
    save();
    throw;
  }
  save();
  const Diagnosis& d = *s->engine().diagnosis();
  if (!a.transcript.empty())
    write_file(a.transcript, transcript_to_json(s->tree(), d.transcript).dump(2) + "\n");
  out << diagnosis_to_json(s->tree(), d).dump(2) << "\n";
  (void)err;
  return ExitDiagnosis;
}

int run_eval(const std::string& grammar, const std::string& input, bool dump_tree,
             const std::string& dump_slice, const std::string& dump_ct, std::ostream& out,
             std::ostream& err) {
  std::unique_ptr<AttributedTree> at = prepare_tree(read_file(grammar), input);
  if (!dump_slice.empty()) {
    InstanceId id = parse_instance_address(*at, dump_slice);
    out << slice_to_json(*at, dynamic_slice(at->graph, id)).dump(2) << "\n";
  } else if (!dump_ct.empty()) {
    InstanceId id = parse_instance_address(*at, dump_ct);
    out << computation_tree_to_json(*at, build_computation_tree(*at, id)).dump(2) << "\n";
  } else if (dump_tree) {
    out << tree_to_json(*at).dump(2) << "\n";
  } else {
    for (InstanceId id = 0; id < static_cast<InstanceId>(at->graph.size()); ++id)
      if (at->graph.instance(id).node == at->tree.root())
        out << at->instance_name(id) << " = " << slot_to_string(at->value(id)) << "\n";
  }
  if (at->failed)
    err << "evaluation incomplete: " << at->instance_name(*at->failed) << ": "
        << slot_to_string(at->value(*at->failed)) << "\n";
  return ExitOk;
}

int run_check(const std::string& path, std::ostream& out) {
  Grammar g;
  try {
    g = parse_grammar(read_file(path));
  } catch (const GrammarSyntaxError& e) {
    throw UserError(path + ": " + e.what());
  }
  ValidationReport r = validate_grammar(g);
  if (r.empty()) {
    out << "ok: " << g.productions.size() << " productions, " << g.decls.size()
        << " attribute declarations\n";
    return ExitOk;
  }
  out << r.to_string();
  return ExitUserError;
}

int run_serve(const std::string& host, int port, std::ostream& out) {
  if (const char* env = std::getenv("AGDBG_PORT"); env && *env) {
    try {
      port = std::stoi(env);
    } catch (const std::exception&) {
      throw UserError(std::string("AGDBG_PORT is not a port number: ") + env);
    }
  }
  SessionManager sessions;
  Server server(sessions);
  int bound = server.bind(host, port);
  if (bound < 0) throw UserError("cannot listen on " + host + ":" + std::to_string(port));
  out << "listening on " << host << ":" << bound << std::endl;
  return server.serve() ? ExitOk : ExitUserError;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Attribute-grammar evaluator and fault localizer", "agdbg"};
  app.require_subcommand(1);

  std::string grammar;
  auto* check = app.add_subcommand("check", "Validate a grammar");
  check->add_option("grammar", grammar, "Grammar file")->required();

  std::string input;
  bool dump_tree = false;
  std::string dump_slice, dump_ct;
  auto* eval = app.add_subcommand("eval", "Parse and evaluate an input");
  eval->add_option("grammar", grammar, "Grammar file")->required();
  eval->add_option("--input", input, "Input text")->required();
  auto* dt = eval->add_flag("--dump-tree", dump_tree, "Print the attributed tree as JSON");
  auto* ds = eval->add_option("--dump-slice", dump_slice, "Print the slice of an instance");
  auto* dc = eval->add_option("--dump-ct", dump_ct, "Print the computation tree of an instance");
  dt->excludes(ds)->excludes(dc);
  ds->excludes(dc);

  DebugArgs d;
  auto* debug = app.add_subcommand("debug", "Locate a faulty attribution rule");
  debug->add_option("grammar", d.grammar, "Grammar file");
  auto* in_opt = debug->add_option("--input", d.input, "Input text");
  debug->add_option("--mode", d.mode, "algorithmic or slice")
      ->check(CLI::IsMember({"algorithmic", "slice"}));
  debug->add_option("--symptom", d.symptom, "Incorrect instance, e.g. L.val@node6 or L[2].val");
  debug->add_option("--oracle", d.oracle, "interactive, golden:<grammar> or script:<file>");
  debug->add_flag("--refine", d.refine, "Refine algorithmic diagnoses to a single rule");
  debug->add_option("--strategy", d.strategy, "top-down or dq")
      ->check(CLI::IsMember({"top-down", "dq"}));
  debug->add_option("--first-cut", d.first_cut, "Size of s1 in the first bisection round");
  debug->add_option("--save-session", d.save, "Write the session to a file");
  debug->add_option("--load-session", d.load, "Resume a saved session");
  debug->add_option("--transcript", d.transcript, "Write the transcript to a file");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the session service");
  serve->add_option("--port", port, "Port (AGDBG_PORT overrides)");
  serve->add_option("--host", host, "Interface to bind");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ExitOk : ExitUserError;
  }

  try {
    if (*check) return run_check(grammar, out);
    if (*eval) return run_eval(grammar, input, dump_tree, dump_slice, dump_ct, out, err);
    if (*debug) {
      d.has_input = in_opt->count() > 0;
      return run_debug(d, in, out, err);
    }
    if (*serve) return run_serve(host, port, out);
  } catch (const std::exception& e) {
    // User errors, session errors, debugging errors and bad addresses alike.
    err << "error: " << e.what() << "\n";
  }
  return ExitUserError;
}

}  // namespace agdbg
