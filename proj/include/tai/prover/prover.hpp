#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "tai/knowledge_base.hpp"
#include "tai/prover/proof.hpp"

namespace tai::prover {

struct Budget {
  int max_depth = 14;
  int max_formula_size = 400;
  int max_candidates = 64;
  /// Safety valve on total search steps; not part of the proof theory.
  long max_steps = 2'000'000;
};

enum class Exhausted { None, Depth, Size, Candidates, Steps };
const char* to_string(Exhausted e);

/// Either a proof or the budget dimension that cut the search.
struct ProveResult {
  Proof proof;
  Exhausted exhausted = Exhausted::None;
  long steps = 0;

  bool ok() const { return proof != nullptr; }
};

/// Bounded goal-directed search. On success the proof's conclusion is `goal`
/// and check() accepts it. Deterministic for fixed inputs.
ProveResult prove(const KnowledgeBase& gamma, const Formula& goal,
                  const Budget& budget = {});

/// Same search over an explicit premise list (no sort checking).
ProveResult prove(const Signature& sig, std::span<const Formula> gamma,
                  const Formula& goal, const Budget& budget = {});

struct ConsistencyResult {
  /// A proof of false from gamma plus extra; null means none was found.
  Proof refutation;
  Exhausted exhausted = Exhausted::None;

  /// Consistent as far as the bounded search could tell.
  bool consistent() const { return refutation == nullptr; }
};

ConsistencyResult consistent(const KnowledgeBase& gamma,
                             std::span<const Formula> extra,
                             const Budget& budget = {});

class NoProofWithinBudget : public std::runtime_error {
 public:
  NoProofWithinBudget(const std::string& goal, Exhausted e)
      : std::runtime_error("no proof of " + goal + " within budget (" +
                           to_string(e) + ")"),
        exhausted(e) {}
  Exhausted exhausted;
};

/// prove() that throws NoProofWithinBudget instead of returning a null proof.
Proof prove_or_throw(const KnowledgeBase& gamma, const Formula& goal,
                     const Budget& budget = {});

}  // namespace tai::prover
