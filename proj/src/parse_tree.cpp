#include "agdbg/parse_tree.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

namespace agdbg {

std::vector<Token> tokenize(const Grammar& g, std::string_view input) {
  std::vector<Token> out;
  std::size_t pos = 0;
  while (pos < input.size()) {
    if (g.skip_whitespace && std::isspace(static_cast<unsigned char>(input[pos]))) {
      ++pos;
      continue;
    }
    const std::string* best = nullptr;
    for (const std::string& t : g.terminals) {
      if (input.substr(pos, t.size()) == t && (!best || t.size() > best->size())) best = &t;
    }
    if (!best)
      throw InputError(pos, "unknown character '" + std::string(1, input[pos]) + "' at offset " +
                                std::to_string(pos));
    out.push_back(Token{*best, InputSpan{pos, pos + best->size()}});
    pos += best->size();
  }
  return out;
}

std::string ParseTree::node_name(NodeId id) const {
  const ParseNode& n = node(id);
  if (n.symbol.terminal) return "\"" + n.symbol.name + "\"";
  return n.symbol.name + std::to_string(n.ordinal);
}

NodeId ParseTree::occurrence_node(NodeId n, int occurrence) const {
  if (occurrence == 0) return n;
  return node(n).children.at(static_cast<std::size_t>(occurrence - 1));
}

bool operator==(const ParseTree& a, const ParseTree& b) {
  if (a.nodes_.size() != b.nodes_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const ParseNode& x = a.nodes_[i];
    const ParseNode& y = b.nodes_[i];
    if (!(x.symbol == y.symbol) || x.production != y.production || x.children != y.children ||
        !(x.span == y.span))
      return false;
  }
  return true;
}

namespace {

class TreeLayout {
 public:
  explicit TreeLayout(const Grammar& g) : g_(g) {}

  std::vector<ParseNode> nodes;
  std::string yield;

  NodeId add_nonterminal(const Derivation& d, NodeId parent,
                         const std::vector<InputSpan>* token_spans, std::size_t& next_token) {
    const Production& p = g_.productions.at(d.production);
    NodeId id = static_cast<NodeId>(nodes.size()) + 1;
    nodes.push_back(ParseNode{});
    {
      ParseNode& n = nodes.back();
      n.id = id;
      n.symbol = Symbol{false, p.lhs};
      n.production = d.production;
      n.parent = parent;
      n.ordinal = ++ordinals_[n.symbol.name];
    }
    std::size_t child_index = 0;
    std::vector<NodeId> children;
    for (const Symbol& s : p.rhs) {
      if (s.terminal) {
        NodeId tid = static_cast<NodeId>(nodes.size()) + 1;
        ParseNode t;
        t.id = tid;
        t.symbol = s;
        t.parent = id;
        t.last_descendant = tid;
        t.ordinal = ++ordinals_["\"" + s.name + "\""];
        if (token_spans) {
          t.span = (*token_spans).at(next_token);
        } else {
          t.span = InputSpan{yield.size(), yield.size() + s.name.size()};
        }
        ++next_token;
        yield += s.name;
        nodes.push_back(std::move(t));
        children.push_back(tid);
      } else {
        if (child_index >= d.children.size())
          throw std::invalid_argument("derivation is missing a child for " + s.name);
        const Derivation& c = d.children[child_index++];
        if (g_.productions.at(c.production).lhs != s.name)
          throw std::invalid_argument("derivation child does not derive " + s.name);
        children.push_back(add_nonterminal(c, id, token_spans, next_token));
      }
    }
    ParseNode& n = nodes[static_cast<std::size_t>(id - 1)];
    n.children = children;
    n.last_descendant = static_cast<NodeId>(nodes.size());
    const ParseNode& first = nodes[static_cast<std::size_t>(children.front() - 1)];
    const ParseNode& last = nodes[static_cast<std::size_t>(children.back() - 1)];
    n.span = InputSpan{first.span.begin, last.span.end};
    return id;
  }

 private:
  const Grammar& g_;
  std::map<std::string, int> ordinals_;
};

// Earley item: production, dot position, origin set.
struct Item {
  std::size_t prod;
  std::size_t dot;
  std::size_t origin;
  auto operator<=>(const Item&) const = default;
};

class ChartParser {
 public:
  ChartParser(const Grammar& g, const std::vector<Token>& toks, std::size_t input_length)
      : g_(g), toks_(toks), input_length_(input_length) {
    for (std::size_t i = 0; i < g.productions.size(); ++i) {
      std::size_t a = nt_index(g.productions[i].lhs);
      by_lhs_[a].push_back(i);
    }
  }

  ParseTree run() {
    recognize();
    count_spans();
    std::size_t n = toks_.size();
    std::size_t start = nt_index(g_.start);
    std::uint8_t total = cnt(start, 0, n);
    if (total == 0) throw NoParseError(input_length_, "no parse for input");
    if (total > 1) throw AmbiguityError(0, "ambiguous input: " + ambiguity_detail(start, 0, n));
    Derivation d = build(start, 0, n);
    TreeLayout layout(g_);
    std::vector<InputSpan> spans;
    for (const Token& t : toks_) spans.push_back(t.span);
    std::size_t next = 0;
    layout.add_nonterminal(d, 0, &spans, next);
    return ParseTree(std::move(layout.nodes));
  }

 private:
  std::size_t nt_index(const std::string& name) {
    auto [it, fresh] = nt_.emplace(name, nt_.size());
    if (fresh) by_lhs_.emplace_back();
    return it->second;
  }
  std::size_t nt_lookup(const std::string& name) const {
    auto it = nt_.find(name);
    return it == nt_.end() ? static_cast<std::size_t>(-1) : it->second;
  }

  bool token_matches(const Symbol& s, std::size_t pos) const {
    return s.terminal && pos < toks_.size() && toks_[pos].text == s.name;
  }

  void recognize() {
    std::size_t n = toks_.size();
    sets_.assign(n + 1, {});
    completed_.assign(n + 1, {});
    std::size_t start = nt_lookup(g_.start);
    for (std::size_t p : by_lhs_[start]) sets_[0].insert(Item{p, 0, 0});
    for (std::size_t k = 0; k <= n; ++k) {
      std::vector<Item> work(sets_[k].begin(), sets_[k].end());
      std::set<std::size_t> predicted;
      while (!work.empty()) {
        Item it = work.back();
        work.pop_back();
        const Production& p = g_.productions[it.prod];
        if (it.dot == p.rhs.size()) {
          std::size_t a = nt_lookup(p.lhs);
          completed_[k].insert({a, it.origin});
          for (const Item& parent : sets_[it.origin]) {
            const Production& q = g_.productions[parent.prod];
            if (parent.dot < q.rhs.size() && !q.rhs[parent.dot].terminal &&
                q.rhs[parent.dot].name == p.lhs) {
              Item next{parent.prod, parent.dot + 1, parent.origin};
              if (sets_[k].insert(next).second) work.push_back(next);
            }
          }
          continue;
        }
        const Symbol& s = p.rhs[it.dot];
        if (s.terminal) {
          if (token_matches(s, k)) sets_[k + 1].insert(Item{it.prod, it.dot + 1, it.origin});
          continue;
        }
        std::size_t b = nt_lookup(s.name);
        if (b == static_cast<std::size_t>(-1) || !predicted.insert(b).second) continue;
        for (std::size_t q : by_lhs_[b]) {
          Item pred{q, 0, k};
          if (sets_[k].insert(pred).second) work.push_back(pred);
        }
      }
      if (k < n && sets_[k + 1].empty()) {
        throw NoParseError(toks_[k].span.begin, "no parse: unexpected token '" + toks_[k].text +
                                                    "' at offset " +
                                                    std::to_string(toks_[k].span.begin));
      }
    }
    std::size_t a = nt_lookup(g_.start);
    if (!completed_[n].count({a, 0})) {
      throw NoParseError(input_length_, n == 0 ? "no parse: empty input"
                                               : "no parse: unexpected end of input at offset " +
                                                     std::to_string(input_length_));
    }
  }

  std::uint8_t& cnt(std::size_t a, std::size_t i, std::size_t j) {
    std::size_t n = toks_.size() + 1;
    return counts_[(a * n + i) * n + j];
  }

  static std::uint8_t sat_add(std::uint8_t x, std::uint8_t y) {
    return static_cast<std::uint8_t>(std::min(2, x + y));
  }
  static std::uint8_t sat_mul(std::uint8_t x, std::uint8_t y) {
    return static_cast<std::uint8_t>(std::min(2, x * y));
  }

  // Number of ways (saturating at 2) that rhs[k..] of production p derives [pos, j).
  // Only reads counts of spans shorter than [pos, j) unless p is a unit
  // production, so memoized results stay valid while counting.
  std::uint8_t sequence_ways(std::size_t prod, std::size_t k, std::size_t pos, std::size_t j) {
    const Production& p = g_.productions[prod];
    std::size_t remaining = p.rhs.size() - k;
    if (remaining == 0) return pos == j ? 1 : 0;
    if (j - pos < remaining) return 0;
    std::size_t n = toks_.size() + 1;
    std::uint64_t key = ((static_cast<std::uint64_t>(prod) * 64 + k) * n + pos) * n + j;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::uint8_t result = sequence_ways_uncached(prod, k, pos, j);
    memo_.emplace(key, result);
    return result;
  }

  std::uint8_t sequence_ways_uncached(std::size_t prod, std::size_t k, std::size_t pos,
                                      std::size_t j) {
    const Production& p = g_.productions[prod];
    std::size_t remaining = p.rhs.size() - k;
    const Symbol& s = p.rhs[k];
    if (s.terminal) return token_matches(s, pos) ? sequence_ways(prod, k + 1, pos + 1, j) : 0;
    std::size_t b = nt_lookup(s.name);
    if (b == static_cast<std::size_t>(-1)) return 0;
    std::uint8_t total = 0;
    for (std::size_t r = pos + 1; r + (remaining - 1) <= j; ++r) {
      std::uint8_t c = cnt(b, pos, r);
      if (c == 0) continue;
      total = sat_add(total, sat_mul(c, sequence_ways(prod, k + 1, r, j)));
      if (total == 2) break;
    }
    return total;
  }

  static bool is_unit(const Production& p) { return p.rhs.size() == 1 && !p.rhs[0].terminal; }

  void count_spans() {
    std::size_t n = toks_.size();
    std::size_t nts = nt_.size();
    counts_.assign(nts * (n + 1) * (n + 1), 0);
    for (std::size_t len = 1; len <= n; ++len) {
      for (std::size_t i = 0; i + len <= n; ++i) {
        std::size_t j = i + len;
        std::vector<std::uint8_t> base(nts, 0);
        for (std::size_t a = 0; a < nts; ++a) {
          if (!completed_[j].count({a, i})) continue;
          for (std::size_t p : by_lhs_[a]) {
            if (is_unit(g_.productions[p])) continue;
            base[a] = sat_add(base[a], sequence_ways(p, 0, i, j));
          }
        }
        // Unit productions may form cycles; iterate to a saturating fixpoint.
        for (bool changed = true; changed;) {
          changed = false;
          for (std::size_t a = 0; a < nts; ++a) {
            if (!completed_[j].count({a, i})) continue;
            std::uint8_t v = base[a];
            for (std::size_t p : by_lhs_[a]) {
              if (!is_unit(g_.productions[p])) continue;
              std::size_t b = nt_lookup(g_.productions[p].rhs[0].name);
              if (b != static_cast<std::size_t>(-1)) v = sat_add(v, cnt(b, i, j));
            }
            if (v != cnt(a, i, j)) {
              cnt(a, i, j) = v;
              changed = true;
            }
          }
        }
      }
    }
  }

  std::string ambiguity_detail(std::size_t a, std::size_t i, std::size_t j) {
    std::string name;
    for (const auto& [k, v] : nt_)
      if (v == a) name = k;
    std::size_t begin = i < toks_.size() ? toks_[i].span.begin : input_length_;
    std::size_t end = j > 0 ? toks_[j - 1].span.end : 0;
    return name + " derives input [" + std::to_string(begin) + ", " + std::to_string(end) +
           ") in more than one way";
  }

  bool split(std::size_t prod, std::size_t k, std::size_t pos, std::size_t j,
             std::vector<std::pair<std::size_t, std::size_t>>& parts) {
    const Production& p = g_.productions[prod];
    if (k == p.rhs.size()) return pos == j;
    const Symbol& s = p.rhs[k];
    if (s.terminal) return token_matches(s, pos) && split(prod, k + 1, pos + 1, j, parts);
    std::size_t b = nt_lookup(s.name);
    for (std::size_t r = pos + 1; r <= j; ++r) {
      if (cnt(b, pos, r) == 0 || sequence_ways(prod, k + 1, r, j) == 0) continue;
      parts.emplace_back(pos, r);
      return split(prod, k + 1, r, j, parts);
    }
    return false;
  }

  Derivation build(std::size_t a, std::size_t i, std::size_t j) {
    for (std::size_t p : by_lhs_[a]) {
      const Production& prod = g_.productions[p];
      Derivation d;
      d.production = p;
      if (is_unit(prod)) {
        std::size_t b = nt_lookup(prod.rhs[0].name);
        if (cnt(b, i, j) == 0) continue;
        d.children.push_back(build(b, i, j));
        return d;
      }
      if (sequence_ways(p, 0, i, j) == 0) continue;
      std::vector<std::pair<std::size_t, std::size_t>> parts;
      split(p, 0, i, j, parts);
      std::size_t part = 0;
      for (const Symbol& s : prod.rhs) {
        if (s.terminal) continue;
        auto [from, to] = parts[part++];
        d.children.push_back(build(nt_lookup(s.name), from, to));
      }
      return d;
    }
    throw std::logic_error("chart parser: no derivation to build");
  }

  const Grammar& g_;
  const std::vector<Token>& toks_;
  std::size_t input_length_;
  std::map<std::string, std::size_t> nt_;
  std::vector<std::vector<std::size_t>> by_lhs_;
  std::vector<std::set<Item>> sets_;
  std::vector<std::set<std::pair<std::size_t, std::size_t>>> completed_;
  std::vector<std::uint8_t> counts_;
  std::unordered_map<std::uint64_t, std::uint8_t> memo_;
};

}  // namespace

ParseTree tree_from_derivation(const Grammar& g, const Derivation& d, std::string* yield) {
  TreeLayout layout(g);
  std::size_t next = 0;
  layout.add_nonterminal(d, 0, nullptr, next);
  if (yield) *yield = layout.yield;
  return ParseTree(std::move(layout.nodes));
}

ParseTree parse_input(const Grammar& g, const std::vector<Token>& tokens,
                      std::size_t input_length) {
  if (input_length == 0 && !tokens.empty()) input_length = tokens.back().span.end;
  ChartParser parser(g, tokens, input_length);
  return parser.run();
}

}  // namespace agdbg
