// Tokenizing and parsing input strings against the syntax of a grammar.
#pragma once

#include "agdbg/grammar.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace agdbg {

/// Half-open byte range [begin, end) of the input text.
struct InputSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const InputSpan&, const InputSpan&) = default;
};

struct Token {
  std::string text;
  InputSpan span;
};

class InputError : public std::runtime_error {
 public:
  InputError(std::size_t offset, const std::string& message)
      : std::runtime_error(message), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class NoParseError : public InputError {
 public:
  using InputError::InputError;
};

class AmbiguityError : public InputError {
 public:
  using InputError::InputError;
};

/// Longest match over the grammar's terminal literals, left to right.
std::vector<Token> tokenize(const Grammar& g, std::string_view input);

/// Node ids are 1-based and assigned in preorder, terminal leaves included.
using NodeId = int;

struct ParseNode {
  NodeId id = 0;
  Symbol symbol;
  std::optional<std::size_t> production;  // set for nonterminals
  std::vector<NodeId> children;
  InputSpan span;
  NodeId parent = 0;  // 0 for the root
  NodeId last_descendant = 0;
  int ordinal = 0;  // 1-based preorder index among nodes of the same symbol
};

class ParseTree {
 public:
  ParseTree() = default;
  explicit ParseTree(std::vector<ParseNode> nodes) : nodes_(std::move(nodes)) {}

  NodeId root() const { return 1; }
  std::size_t size() const { return nodes_.size(); }
  const ParseNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id - 1)); }
  const std::vector<ParseNode>& nodes() const { return nodes_; }

  /// True when `n` lies in the subtree rooted at `top` (inclusive).
  bool in_subtree(NodeId n, NodeId top) const {
    return n >= top && n <= node(top).last_descendant;
  }
  /// Display name: symbol plus per-symbol ordinal, e.g. `L2`.
  std::string node_name(NodeId id) const;
  /// Node carrying occurrence `occurrence` of the production applied at `n`.
  NodeId occurrence_node(NodeId n, int occurrence) const;

  friend bool operator==(const ParseTree& a, const ParseTree& b);

 private:
  std::vector<ParseNode> nodes_;
};

/// A derivation: the production applied plus derivations of its
/// right-hand-side nonterminals, left to right.
struct Derivation {
  std::size_t production = 0;
  std::vector<Derivation> children;
};

/// Lays out a derivation as a ParseTree; spans are computed from the
/// terminal yield, which is also returned through `yield` if given.
ParseTree tree_from_derivation(const Grammar& g, const Derivation& d,
                               std::string* yield = nullptr);

/// Chart parse of the token sequence. Throws NoParseError (furthest failure
/// offset) or AmbiguityError when two distinct trees exist.
ParseTree parse_input(const Grammar& g, const std::vector<Token>& tokens,
                      std::size_t input_length = 0);

}  // namespace agdbg
