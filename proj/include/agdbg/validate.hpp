#pragma once

#include "agdbg/grammar.hpp"

#include <string>
#include <vector>

namespace agdbg {

enum class IssueKind {
  MissingDefinition,
  DuplicateDefinition,
  OutOfScopeReference,
  BadTarget,
  SortError,
  DeclarationError,
  StructureError,
};

struct ValidationIssue {
  IssueKind kind;
  std::string production;  // empty for grammar-level issues
  SourceSpan span;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool empty() const { return issues.empty(); }
  std::string to_string() const;
};

/// Checks completeness in Bochmann normal form (every production defines
/// each synthesized attribute of its left-hand side and each inherited
/// attribute of its right-hand-side nonterminals exactly once), scoping
/// and sorts. Problems are reported, never thrown.
ValidationReport validate_grammar(const Grammar& g);

}  // namespace agdbg
