#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tai/formula.hpp"

namespace tai::prover {

/// Natural-deduction rules plus the modal schemata of the calculus.
enum class Rule {
  Hyp,          // leaf: a member of Γ or a live assumption
  Reiteration,  // repeat a premise
  AndI,
  AndE,
  OrI,
  OrE,
  ImpI,
  ImpE,
  NotI,
  NotE,
  FalseE,
  DNE,
  ForallI,
  ForallE,
  ExistsI,
  ExistsE,
  IK,   // K(a,t1,Γ'), Γ' ⊢ φ, t1 <= t2  ==>  K(a,t2,φ)
  IB,   // same shape for B
  I4,   // K(a,t,φ) ==> φ
  I13,  // t < t', I(a,t,ψ) ==> P(a,t',ψ)
  I14,  // B(a,t,φ), B(a,t,O(a,t,φ,χ)), O(a,t,φ,χ) ==> K(a,t,I(a,t,χ))
};

inline constexpr int kRuleCount = static_cast<int>(Rule::I14) + 1;

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);

struct ProofNode;
using Proof = std::shared_ptr<const ProofNode>;

/// One inference step. Premise order per rule:
///   AndI: one per conjunct        AndE/OrI/DNE/FalseE/I4/I13/Reiteration: [p]
///   OrE: [disjunction, case_1..case_n]   ImpI/NotI/ForallI/ExistsI: [body]
///   ImpE: [A -> B, A]   NotE: [not A, A]   ForallE: [forall x. A]
///   ExistsE: [exists x. A, C]   IK/IB: [attitude_1..attitude_k, inner]
///   I14: [B(a,t,phi), B(a,t,O(..)), O(..)]
struct ProofNode {
  Formula conclusion;
  Rule rule = Rule::Hyp;
  std::vector<Proof> premises;
  /// Hyp: -1 for a member of Γ, otherwise the live assumption's label.
  int hyp_label = -1;
  /// Labels bound by ImpI/NotI/ExistsE (one), OrE (one per case), IK/IB (one
  /// per attitude premise, naming its content inside the inner proof).
  std::vector<int> discharged;
  /// ForallE instance, ExistsI witness, ForallI/ExistsE eigenconstant.
  Term term;
  /// IK/IB: (t1, t2) with t1 <= t2.  I13: (t, t') with t < t'.
  Term time_from;
  Term time_to;
};

Proof make_node(ProofNode n);

/// Node count of the tree.
std::size_t proof_size(const Proof& p);
/// Every rule occurring in the tree, in post-order.
std::vector<Rule> rules_used(const Proof& p);
/// Post-order listing; a node's position is its serialized id.
std::vector<const ProofNode*> post_order(const Proof& p);

}  // namespace tai::prover
