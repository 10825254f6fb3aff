#pragma once

#include <span>
#include <string>
#include <vector>

#include "tai/errors.hpp"
#include "tai/formula.hpp"

namespace tai::ec {

/// A moment the projection cannot place on the integer timeline.
class UnorderedMoment : public Error {
 public:
  explicit UnorderedMoment(const std::string& t)
      : Error("moment " + t + " is not ordered against the narrative") {}
};

struct Axiom {
  std::string label;
  Formula formula;
};

/// The discrete event-calculus axioms plus the capability axiom. Only
/// built-in symbols occur, so the formulas are valid over any signature.
const std::vector<Axiom>& axioms();
std::vector<Formula> axiom_formulas();

/// Ground event-calculus facts of a scenario.
struct Narrative {
  struct Happening {
    Term event;
    Term time;
  };
  struct Effect {
    Term event;
    Term fluent;
    Term time;
  };
  std::vector<Happening> happens;
  std::vector<Effect> initiates;
  std::vector<Effect> terminates;
  std::vector<Term> initially;

  /// Picks out the ground happens/initiates/terminates/initially atoms.
  static Narrative from_formulas(std::span<const Formula> fs);

  /// The facts as atoms, in field order.
  std::vector<Formula> facts(const Signature& sig) const;

  /// not clipped(k, f, k+1) for every k < horizon and every fluent mentioned,
  /// unless a listed happening at k terminates f. Makes the narrative
  /// complete for the open-world prover.
  std::vector<Formula> completion(const Signature& sig, long horizon) const;

  std::vector<Term> fluents() const;
};

/// Closed-world forward simulation: state(k+1) = state(k) - terminated(k)
/// + initiated(k), starting from the initially set at moment 0.
bool project(const Narrative& n, const Term& fluent, const Term& t);

}  // namespace tai::ec
