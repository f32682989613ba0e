// Acceptance run: one PASS/FAIL line per criterion. Thresholds are fixed
// below; the process exits non-zero when any criterion fails.
#include "agdbg/debugger.hpp"
#include "agdbg/format.hpp"
#include "agdbg/json_io.hpp"
#include "agdbg/mutation.hpp"
#include "agdbg/oracles.hpp"
#include "agdbg/synth_tree.hpp"

#include "fixtures.hpp"
#include "invariants.hpp"
#include "random_ag.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

using namespace agdbg;
using namespace agdbg::testing;

namespace {

constexpr double kWorkedExampleSeconds = 1.0;
constexpr std::size_t kMaxWalkthroughQueries = 5;
constexpr std::size_t kFourOfNineCut = 4;
constexpr std::size_t kMutations = 200;
constexpr int kMaxDigits = 6;
constexpr double kSweepSeconds = 60.0;
constexpr std::uint64_t kRandomGrammars = 300;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << what;
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string rule_text(const AttributedTree& at, const RuleApplication& r) {
  const Production& p = at.grammar->productions[r.production];
  return format_rule(p, p.rules[r.rule]);
}

std::string transcript_line(const AttributedTree& at, const Diagnosis& d) {
  std::string s;
  for (const TranscriptEntry& e : d.transcript)
    s += (s.empty() ? "" : ", ") + at.instance_name(query_instance(e.query)) + " " +
         answer_kind_name(e.answer.kind);
  return s;
}

Rational value_of(const AttributedTree& at, const std::string& name) {
  return std::get<Value>(at.value(parse_instance_address(at, name))).as_rational();
}

void report(const std::string& name, Outcome& o, bool& all) {
  std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << "\n";
  all = all && o.pass;
}

// ---------------------------------------------------------------------------

Outcome worked_example() {
  Outcome o;
  auto start = Clock::now();
  AttributedTree buggy = eval_file("binfrac_buggy.ag", ".011");
  AttributedTree fixed = eval_file("binfrac_fixed.ag", ".011");
  double t = seconds_since(start);
  o.require(value_of(buggy, "L2.pos") == 2, "L2.pos != 2");
  o.require(value_of(buggy, "B2.pos") == 3, "B2.pos != 3");
  o.require(value_of(buggy, "B2.val") == Rational(1, 8), "B2.val != 1/8");
  o.require(value_of(buggy, "L2.val") == Rational(1, 4), "L2.val != 1/4");
  o.require(value_of(fixed, "L2.val") == Rational(3, 8), "fixed L2.val != 3/8");
  o.require(t < kWorkedExampleSeconds, "too slow");
  if (o.pass)
    o.detail << "L2.pos=2 B2.pos=3 B2.val=1/8 L2.val=1/4; fixed L2.val=3/8; " << t * 1000 << " ms";
  return o;
}

Outcome algorithmic_walkthrough() {
  Outcome o;
  AttributedTree at = eval_file("binfrac_buggy.ag", ".011");
  GoldenOracle golden(load_grammar("binfrac_fixed.ag"), at);
  InstanceId symptom = parse_instance_address(at, "L2.val");
  RuleApplication bug{*at.grammar->production_index("L_1"), 1, 6};

  Diagnosis d = algorithmic_debug(at, symptom, golden);
  std::string seen = transcript_line(at, d);
  o.require(seen == "L2.val incorrect, B2.val correct, L3.val correct", "transcript " + seen);
  bool all_synth = true;
  for (const TranscriptEntry& e : d.transcript)
    all_synth = all_synth && std::holds_alternative<SynthQuery>(e.query);
  o.require(all_synth, "non-synth query in the unrefined run");
  o.require(std::count(d.candidates.begin(), d.candidates.end(), bug) == 1, "region misses the planted rule");

  AlgorithmicOptions refine;
  refine.refine = true;
  Diagnosis r = algorithmic_debug(at, symptom, golden, refine);
  o.require(r.certainty == Certainty::Exact && r.candidates == std::vector<RuleApplication>{bug},
            "refined diagnosis not exact on the planted rule");
  o.require(r.queries_asked() <= kMaxWalkthroughQueries, "refined run over budget");
  if (o.pass)
    o.detail << seen << "; region of " << d.candidates.size() << " rules contains \""
             << rule_text(at, bug) << "\"; refined exact after " << r.queries_asked()
             << " queries";
  return o;
}

Outcome slice_walkthrough() {
  Outcome o;
  AttributedTree at = eval_file("binfrac_buggy.ag", ".011");
  GoldenOracle golden(load_grammar("binfrac_fixed.ag"), at);
  InstanceId symptom = parse_instance_address(at, "L2.val");
  SliceOptions opts;
  opts.first_cut = kFourOfNineCut;
  Diagnosis d = slice_debug(at, symptom, golden, opts);
  std::string seen = transcript_line(at, d);
  o.require(seen == "B2.val incorrect, L2.pos correct, B2.pos incorrect", "transcript " + seen);
  o.require(d.queries_asked() == 3, "query count");
  o.require(d.certainty == Certainty::Exact && d.candidates.size() == 1, "not exact");
  if (d.candidates.size() == 1)
    o.require(rule_text(at, *d.candidates.begin()) == "B.pos = L0.pos + 1", "wrong rule");
  if (o.pass) o.detail << seen << "; exact \"B.pos = L0.pos + 1\"";
  return o;
}

bool names_rule(const Diagnosis& d, const MutationSite& site) {
  for (const RuleApplication& r : d.candidates)
    if (r.production == site.production && r.rule == site.rule) return true;
  return false;
}

bool exactly(const Diagnosis& d, const MutationSite& site) {
  return d.certainty == Certainty::Exact && d.candidates.size() == 1 && names_rule(d, site);
}

std::size_t synth_queries(const Diagnosis& d) {
  std::size_t n = 0;
  for (const TranscriptEntry& e : d.transcript) n += std::holds_alternative<SynthQuery>(e.query);
  return n;
}

void mutation_sweep(Outcome& completeness, Outcome& budgets) {
  auto start = Clock::now();
  auto fixed = load_grammar("binfrac_fixed.ag");
  std::vector<std::string> inputs;
  for (int k = 0; k <= kMaxDigits; ++k)
    for (int bits = 0; bits < (1 << k); ++bits) {
      std::string s = ".";
      for (int i = k - 1; i >= 0; --i) s += (bits >> i & 1) ? '1' : '0';
      inputs.push_back(s);
    }
  std::size_t runs = 0, symptomatic = 0, misses = 0, circular = 0, unparsable = 0, failed = 0;
  std::size_t over_budget = 0, max_rounds = 0, max_ct_queries = 0;
  std::string first_miss, first_budget;
  std::set<std::string> distinct;
  for (std::uint64_t seed = 0; seed < kMutations; ++seed) {
    Mutation m = mutate_rule(*fixed, seed);
    distinct.insert(m.description);
    auto mutant = std::make_shared<const Grammar>(m.grammar);
    for (const std::string& input : inputs) {
      std::optional<AttributedTree> at;
      try {
        at = attribute_input(mutant, input);
      } catch (const InputError&) {
        ++unparsable;
        continue;
      } catch (const CircularityError&) {
        ++circular;
        continue;
      }
      ++runs;
      GoldenOracle golden(fixed, *at);
      const bool complete = at->status == EvalStatus::Complete;
      InstanceId root = complete ? default_root_symptom(*at) : *at->failed;
      if (!complete) ++failed;
      if (golden.answer(make_value_query(*at, root)) != Answer::incorrect()) continue;
      ++symptomatic;
      auto miss = [&](const std::string& engine) {
        ++misses;
        if (first_miss.empty()) first_miss = engine + " on " + m.description + " with " + input;
      };

      SliceDebugger slicer(*at, root);
      Diagnosis sd = run_debugger(slicer, golden);
      if (!exactly(sd, m.site)) miss("slice");
      std::size_t slice_size = dynamic_slice(at->graph, root).members.size();
      std::size_t round_budget =
          static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(slice_size)))) + 1;
      max_rounds = std::max(max_rounds, slicer.rounds());
      if (slicer.rounds() > round_budget && first_budget.empty()) {
        ++over_budget;
        first_budget = "slice rounds on " + m.description + " with " + input;
      } else if (slicer.rounds() > round_budget) {
        ++over_budget;
      }
      if (!complete) continue;  // no computation tree without a value

      std::size_t ct_size = build_computation_tree(*at, root).size();
      for (Strategy strategy : {Strategy::TopDown, Strategy::DivideAndQuery}) {
        AlgorithmicOptions plain;
        plain.strategy = strategy;
        Diagnosis ad = algorithmic_debug(*at, root, golden, plain);
        if (!names_rule(ad, m.site)) miss("algorithmic");
        max_ct_queries = std::max(max_ct_queries, ad.queries_asked());
        if (ad.queries_asked() > ct_size) {
          ++over_budget;
          if (first_budget.empty()) first_budget = "algorithmic queries on " + m.description;
        }
        AlgorithmicOptions refine = plain;
        refine.refine = true;
        Diagnosis rd = algorithmic_debug(*at, root, golden, refine);
        if (!exactly(rd, m.site)) miss("refined");
        if (synth_queries(rd) > ct_size) {
          ++over_budget;
          if (first_budget.empty()) first_budget = "refined synth queries on " + m.description;
        }
      }
    }
  }
  double t = seconds_since(start);
  completeness.require(misses == 0, std::to_string(misses) + " misses, first: " + first_miss);
  completeness.require(symptomatic > 0, "no symptomatic run");
  completeness.require(t < kSweepSeconds, "sweep took " + std::to_string(t) + " s");
  if (completeness.pass)
    completeness.detail << kMutations << " mutations (" << distinct.size() << " distinct) x "
                        << inputs.size() << " inputs: " << runs << " runs, " << symptomatic
                        << " symptomatic (" << failed << " partial), 0 misses; skipped "
                        << circular << " circular, " << unparsable << " unparsable; " << t
                        << " s";
  budgets.require(over_budget == 0,
                  std::to_string(over_budget) + " runs over budget, first: " + first_budget);
  if (budgets.pass)
    budgets.detail << "all " << symptomatic << " symptomatic runs within budget; max slice rounds "
                   << max_rounds << ", max algorithmic queries " << max_ct_queries;
}

Outcome partial_run() {
  Outcome o;
  AttributedTree at = eval_file("average_buggy.ag", "#1");
  o.require(at.status == EvalStatus::Partial && at.failed.has_value(), "evaluation did not fail");
  if (!o.pass) return o;
  GoldenOracle golden(load_grammar("average_fixed.ag"), at);
  Diagnosis d = slice_debug(at, *at.failed, golden);
  o.require(d.certainty == Certainty::Exact && d.candidates.size() == 1, "slice not exact");
  if (d.candidates.size() == 1)
    o.require(rule_text(at, *d.candidates.begin()) == "D.n = 0", "wrong rule");
  bool refused = false;
  std::string why;
  try {
    build_computation_tree(at, default_root_symptom(at));
  } catch (const ComputationTreeUnavailable& e) {
    refused = true;
    why = e.what();
  }
  o.require(refused, "computation tree built for a partial run");
  if (o.pass)
    o.detail << at.instance_name(*at.failed) << " fails (division by zero); slice exact \"D.n = 0\" in "
             << d.queries_asked() << " queries; " << why;
  return o;
}

Outcome invariants() {
  Outcome o;
  std::map<std::string, std::size_t> violated;
  std::map<std::string, std::string> example;
  std::size_t trees = 0, rooted = 0, productions = 0;
  auto tally = [&](const std::string& name, const Violations& v) {
    if (v.empty()) return;
    if (!violated[name]++) example[name] = v.front();
  };
  for (std::uint64_t seed = 1; seed <= kRandomGrammars; ++seed) {
    AgSample s = random_sample(seed, 6, 6);
    productions = std::max(productions, s.grammar->productions.size());
    for (const AttributedTree& at : s.trees) {
      ++trees;
      tally("slice closure", check_slice_closure(at));
      tally("bisection conservation", check_bisection(at));
      tally("crossing completeness", check_crossing(at));
      tally("evalOrder", check_eval_order(at));
      tally("synth purity/premise sufficiency", check_synth_functions(at));
      if (at.status != EvalStatus::Complete) continue;
      ++rooted;
      InstanceId root = default_root_symptom(at);
      tally("region union", check_region_union(at, root));
      tally("region disjointness", check_region_disjoint(at, root));
      tally("containment", check_containment(at, root));
    }
  }
  o.require(productions <= 6, "generator exceeded six productions");
  for (const auto& [name, n] : violated) {
    o.pass = false;
    o.detail << name << " violated in " << n << " of " << trees << " trees (e.g. " << example[name]
             << "); ";
  }
  if (o.pass) o.detail << "all invariants hold on " << trees << " trees from " << kRandomGrammars
                       << " grammars";
  else o.detail << "other invariants hold";
  return o;
}

}  // namespace

int main() {
  bool all = true;
  Outcome o1 = worked_example();
  report("worked-example", o1, all);
  Outcome o2 = algorithmic_walkthrough();
  report("algorithmic-walkthrough", o2, all);
  Outcome o3 = slice_walkthrough();
  report("slice-walkthrough", o3, all);
  Outcome completeness, budgets;
  mutation_sweep(completeness, budgets);
  report("mutation-completeness", completeness, all);
  report("query-budgets", budgets, all);
  Outcome o6 = partial_run();
  report("partial-run", o6, all);
  Outcome o7 = invariants();
  report("invariant-suites", o7, all);
  return all ? 0 : 1;
}
