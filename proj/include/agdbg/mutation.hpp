// Single-rule mutations of a grammar, for seeding known bugs.
#pragma once

#include "agdbg/grammar.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace agdbg {

enum class MutationOp {
  LiteralPlusOne,
  LiteralMinusOne,
  RefPlusOne,   // `x` becomes `x + 1`
  RefMinusOne,  // `x` becomes `x - 1`
  SwapAddSub,
  OccurrenceSwap,
  DropLeft,   // `a op b` becomes `b`
  DropRight,  // `a op b` becomes `a`
};

const char* mutation_op_name(MutationOp op);

struct MutationSite {
  std::size_t production = 0;
  std::size_t rule = 0;
  std::vector<int> path;  // child indices from the rule's root expression
  MutationOp op = MutationOp::LiteralPlusOne;
  int occurrence = 0;  // OccurrenceSwap: replacement occurrence
};

struct Mutation {
  Grammar grammar;
  MutationSite site;
  std::string description;  // `L_1: B.pos = L0.pos -> B.pos = L0.pos + 1`
};

class NoMutationSite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All sites whose mutant differs from `g` and still validates, in
/// (production, rule, preorder) order.
std::vector<MutationSite> enumerate_mutations(const Grammar& g);

/// Throws std::invalid_argument when the site does not fit `g`.
Mutation apply_mutation(const Grammar& g, const MutationSite& site);

/// Picks one site uniformly with a seeded mt19937_64. Throws NoMutationSite
/// when `g` has none.
Mutation mutate_rule(const Grammar& g, std::uint64_t seed);

}  // namespace agdbg
