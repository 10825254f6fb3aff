#pragma once

#include <optional>
#include <span>
#include <string>

#include "tai/knowledge_base.hpp"
#include "tai/prover/proof.hpp"

namespace tai::prover {

struct CheckResult {
  bool accepted = true;
  /// Post-order index of the first failing node (its serialized id).
  std::size_t node = 0;
  std::string reason;

  explicit operator bool() const { return accepted; }
};

/// Verifies every node of `p` as a rule instance over `gamma`. When
/// `expected` is given the root conclusion must also be alpha-equal to it.
CheckResult check(const Proof& p, const KnowledgeBase& gamma,
                  const std::optional<Formula>& expected = std::nullopt);

CheckResult check(const Proof& p, const Signature& sig,
                  std::span<const Formula> gamma,
                  const std::optional<Formula>& expected = std::nullopt);

}  // namespace tai::prover
