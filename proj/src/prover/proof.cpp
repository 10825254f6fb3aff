#include "tai/prover/proof.hpp"

#include <array>

namespace tai::prover {

namespace {
constexpr std::array<const char*, kRuleCount> kNames = {
    "HYP",  "R",    "AndI",    "AndE",    "OrI",     "OrE",     "ImpI",
    "ImpE", "NotI", "NotE",    "FalseE",  "DNE",     "ForallI", "ForallE",
    "ExistsI", "ExistsE", "IK", "IB", "I4", "I13", "I14"};
}

const char* rule_name(Rule r) { return kNames[static_cast<int>(r)]; }

std::optional<Rule> rule_from_name(const std::string& name) {
  for (int i = 0; i < kRuleCount; ++i)
    if (name == kNames[i]) return static_cast<Rule>(i);
  return std::nullopt;
}

Proof make_node(ProofNode n) {
  return std::make_shared<const ProofNode>(std::move(n));
}

std::vector<const ProofNode*> post_order(const Proof& p) {
  std::vector<const ProofNode*> out;
  // Explicit stack: proofs from long inertia chains get deep.
  std::vector<std::pair<const ProofNode*, std::size_t>> stack{{p.get(), 0}};
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->premises.size()) {
      const ProofNode* child = node->premises[next++].get();
      stack.emplace_back(child, 0);
    } else {
      out.push_back(node);
      stack.pop_back();
    }
  }
  return out;
}

std::size_t proof_size(const Proof& p) { return post_order(p).size(); }

std::vector<Rule> rules_used(const Proof& p) {
  std::vector<Rule> out;
  for (const ProofNode* n : post_order(p)) out.push_back(n->rule);
  return out;
}

}  // namespace tai::prover
