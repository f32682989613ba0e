// Random attribute grammars and derivations for property tests.
#pragma once

#include "agdbg/attribution.hpp"
#include "agdbg/grammar.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

namespace agdbg::testing {

/// A valid grammar with at most six productions over nonterminals S, A and
/// sometimes B. L-attributed grammars are noncircular; otherwise rules may
/// read any attribute in scope and the grammar may be circular.
Grammar random_grammar(std::mt19937_64& rng, bool l_attributed);

/// Random derivation of height <= max_depth, if one exists.
std::optional<Derivation> random_derivation(const Grammar& g, std::mt19937_64& rng, int max_depth);

/// Every derivation of height <= max_depth, stopping after `limit`.
std::vector<Derivation> enumerate_derivations(const Grammar& g, int max_depth, std::size_t limit);

struct AgSample {
  std::shared_ptr<const Grammar> grammar;
  bool l_attributed = true;
  std::vector<AttributedTree> trees;
};

/// A noncircular grammar (no circularity on any tree of height <= 4) with
/// `trees` random attributed trees of height <= max_depth.
AgSample random_sample(std::uint64_t seed, int trees = 4, int max_depth = 5);

}  // namespace agdbg::testing
