#pragma once

#include <span>
#include <vector>

#include "tai/formula.hpp"

namespace tai {

/// Decides t1 < t2 and t1 <= t2 between Moment terms.
///
/// Integer literals compare numerically. Symbolic moments are related only
/// through ground `prior` atoms (transitively closed, mixed freely with
/// literals) and `next(t)`, which sits immediately after t. Pairs the facts
/// do not order are incomparable: both queries answer false.
class MomentOrder {
 public:
  MomentOrder() = default;
  explicit MomentOrder(std::span<const Formula> facts);

  bool less(const Term& a, const Term& b) const;
  bool less_equal(const Term& a, const Term& b) const;
  bool comparable(const Term& a, const Term& b) const {
    return less_equal(a, b) || less_equal(b, a);
  }

 private:
  bool reachable(const Term& from, const Term& to, bool strict) const;

  std::vector<std::pair<Term, Term>> edges_;  // from prior(a, b): a < b
};

}  // namespace tai
