// In-memory model of an attribute grammar: declarations, productions and
// attribution rules. Grammar values are immutable once parsed.
#pragma once

#include "agdbg/value.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace agdbg {

/// Location in grammar source text. Lines and columns are 1-based; the end
/// column is exclusive.
struct SourceSpan {
  int line = 0;
  int column = 0;
  int end_line = 0;
  int end_column = 0;
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class AttrKind { Synthesized, Inherited };

struct AttributeDecl {
  std::string name;
  AttrKind kind = AttrKind::Synthesized;
  Sort sort = Sort::Rational;
  std::vector<std::string> carriers;
  SourceSpan span;

  bool operator==(const AttributeDecl& o) const {
    return name == o.name && kind == o.kind && sort == o.sort && carriers == o.carriers;
  }
};

struct Symbol {
  bool terminal = false;
  std::string name;  // nonterminal name, or the literal text of a terminal
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Attribute of a symbol occurrence inside one production. Occurrence 0 is
/// the left-hand side; k >= 1 is the k-th right-hand-side symbol.
struct AttrRef {
  int occurrence = 0;
  std::string attr;
  friend bool operator==(const AttrRef&, const AttrRef&) = default;
};

enum class ExprKind {
  Literal,
  Ref,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Concat,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  If,
};

const char* binary_operator_token(ExprKind k);
bool is_comparison(ExprKind k);
bool is_arithmetic(ExprKind k);

struct Expr {
  ExprKind kind = ExprKind::Literal;
  Value literal;
  AttrRef ref;
  std::vector<Expr> args;

  static Expr make_literal(Value v);
  static Expr make_ref(AttrRef r);
  static Expr make_unary(ExprKind k, Expr operand);
  static Expr make_binary(ExprKind k, Expr lhs, Expr rhs);
  static Expr make_if(Expr cond, Expr then_branch, Expr else_branch);

  /// Every attribute reference, in left-to-right order (duplicates kept).
  void collect_refs(std::vector<AttrRef>& out) const;

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct AttributionRule {
  AttrRef target;
  Expr expr;
  SourceSpan span;

  bool operator==(const AttributionRule& o) const { return target == o.target && expr == o.expr; }
};

struct Production {
  std::string id;
  std::string lhs;
  std::vector<Symbol> rhs;
  std::vector<AttributionRule> rules;
  SourceSpan span;

  bool operator==(const Production& o) const {
    return id == o.id && lhs == o.lhs && rhs == o.rhs && rules == o.rules;
  }

  /// Symbol name at an occurrence (0 = lhs). Terminals give their literal.
  Symbol symbol_at(int occurrence) const;
  int occurrence_count() const { return static_cast<int>(rhs.size()) + 1; }

  /// Surface name of an occurrence: bare `B` when the symbol occurs once,
  /// `L0`/`L1` style otherwise.
  std::string occurrence_name(int occurrence) const;

  /// Resolve a surface occurrence name (`L0`, `L1`, `B`). Returns nullopt if
  /// the name designates no occurrence; throws std::invalid_argument when it
  /// is ambiguous.
  std::optional<int> resolve_occurrence(std::string_view name) const;
};

struct Grammar {
  std::string start;
  std::vector<AttributeDecl> decls;
  std::vector<Production> productions;
  std::set<std::string> terminals;
  bool skip_whitespace = false;

  bool operator==(const Grammar& o) const {
    return start == o.start && decls == o.decls && productions == o.productions &&
           terminals == o.terminals && skip_whitespace == o.skip_whitespace;
  }

  bool is_nonterminal(std::string_view name) const;
  /// Declaration of `attr` on `symbol`, if any.
  const AttributeDecl* find_decl(std::string_view symbol, std::string_view attr) const;
  /// Declarations carried by `symbol`, ordered by attribute name.
  std::vector<const AttributeDecl*> attributes_of(std::string_view symbol) const;
  std::optional<std::size_t> production_index(std::string_view id) const;

  /// Recomputes `terminals` from the productions.
  void collect_terminals();
};

/// Default production identifier: `<lhs>_<ordinal>` counting productions of
/// the same left-hand side from 1.
std::string default_production_id(const Grammar& g, std::size_t production_index);

}  // namespace agdbg
