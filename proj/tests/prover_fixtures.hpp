#pragma once
// Shared between the prover tests and the acceptance binary.

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tai/knowledge_base.hpp"
#include "tai/parser.hpp"
#include "tai/prover/checker.hpp"
#include "tai/prover/proof.hpp"

namespace fixtures {

using namespace tai;
using namespace tai::prover;

inline Signature schema_sig() {
  Signature s;
  s.declare_constant("a", sorts::Agent);
  s.declare_constant("b", sorts::Agent);
  for (const char* n : {"p", "q", "r", "phi", "chi", "psi"}) s.declare_function(n, {}, sorts::Boolean);
  s.declare_constant("t1", sorts::Moment);
  s.declare_constant("t2", sorts::Moment);
  s.declare_constant("alpha", sorts::ActionType);
  s.declare_sort("Obj");
  s.declare_constant("o1", Sort{"Obj"});
  s.declare_constant("o2", Sort{"Obj"});
  s.declare_function("big", {Sort{"Obj"}}, sorts::Boolean);
  s.declare_function("red", {Sort{"Obj"}}, sorts::Boolean);
  s.declare_function("near", {Sort{"Obj"}, Sort{"Obj"}}, sorts::Boolean);
  return s;
}

struct Golden {
  std::string name;
  std::vector<std::string> gamma;
  std::string goal;
  Rule signature_rule;  // must appear in the proof
};

inline std::vector<Golden> golden_suite() {
  return {
      {"I4", {"(K a t1 phi)"}, "phi", Rule::I4},
      {"IK", {"(K a t1 p)", "(K a t1 (implies p q))", "(prior t1 t2)"}, "(K a t2 q)", Rule::IK},
      {"IB", {"(B a 1 p)", "(B a 2 (implies p q))"}, "(B a 3 q)", Rule::IB},
      {"I14", {"(B a t1 phi)", "(B a t1 (O a t1 phi chi))", "(O a t1 phi chi)"}, "(K a t1 (I a t1 chi))", Rule::I14},
      {"I13", {"(I a t1 psi)", "(prior t1 t2)"}, "(P a t2 psi)", Rule::I13},
      {"excluded-middle", {}, "(or p (not p))", Rule::DNE},
      {"contradiction", {"p", "(not p)"}, "false", Rule::NotE},
      {"double-negation", {"(not (not p))"}, "p", Rule::DNE},
      {"cases", {"(or p q)", "(implies p r)", "(implies q r)"}, "r", Rule::OrE},
      {"forall-elim", {"(forall (x Obj) (implies (big x) (red x)))", "(big o1)"}, "(red o1)", Rule::ForallE},
      {"forall-intro", {"(forall (x Obj) (big x))", "(forall (x Obj) (implies (big x) (red x)))"}, "(forall (y Obj) (red y))", Rule::ForallI},
      {"exists-elim", {"(exists (x Obj) (big x))", "(forall (x Obj) (implies (big x) p))"}, "p", Rule::ExistsE},
      {"exists-intro", {"(near o1 o2)"}, "(exists (x Obj) (near x o2))", Rule::ExistsI},
      {"nested-belief", {"(B a 0 (B b 0 (forall (x Obj) (implies (red x) (big x)))))", "(B a 0 (B b 0 (forall (x Obj) (red x))))"}, "(B a 0 (B b 0 (forall (x Obj) (big x))))", Rule::IB},
      {"can-axiom", {"(not (can a alpha 3))", "(happens (action a alpha) 3)", "(forall (x Agent) (forall (y ActionType) (forall (t Moment) (implies (not (can x y t)) (not (happens (action x y) t))))))"}, "false", Rule::ImpE},
      {"contrapositive", {}, "(implies (implies p q) (implies (not q) (not p)))", Rule::NotI},
      {"falsum-elim", {"false"}, "q", Rule::FalseE},
  };
}

inline KnowledgeBase kb_of(const Signature& sig, const std::vector<std::string>& gamma) {
  KnowledgeBase kb(sig);
  for (const auto& g : gamma) kb.add(parse_formula(g, kb.signature()));
  return kb;
}

// Copy of `p` with the k-th post-order node replaced by f(node).
template <class F>
Proof mutate_at(const Proof& p, std::size_t k, F f) {
  std::size_t counter = 0;
  std::function<Proof(const Proof&)> go = [&](const Proof& q) -> Proof {
    ProofNode n = *q;
    for (Proof& c : n.premises) c = go(c);
    if (counter++ == k) f(n);
    return make_node(std::move(n));
  };
  return go(p);
}

// Every single-node mutation: each other rule id, plus the negated conclusion.
inline std::vector<Proof> mutations(const Proof& p) {
  std::vector<Proof> out;
  std::size_t n = proof_size(p);
  for (std::size_t k = 0; k < n; ++k) {
    for (int r = 0; r < kRuleCount; ++r) {
      Proof m = mutate_at(p, k, [&](ProofNode& node) {
        if (static_cast<int>(node.rule) != r) node.rule = static_cast<Rule>(r);
      });
      if (post_order(m)[k]->rule != post_order(p)[k]->rule) out.push_back(m);
    }
    out.push_back(mutate_at(p, k, [](ProofNode& node) {
      node.conclusion = Formula::negation(node.conclusion);
    }));
  }
  return out;
}

// Forward generator: random rule applications from Γ. Every formula it
// returns is derivable by construction.
struct ForwardGen {
  std::mt19937 rng;
  const Signature& sig;
  std::vector<Formula> gamma;
  std::vector<Formula> derived;

  ForwardGen(unsigned seed, const Signature& s) : rng(seed), sig(s) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  Formula F(const std::string& t) { return parse_formula(t, sig); }
  Formula any(const std::vector<Formula>& v) { return v[pick(static_cast<int>(v.size()))]; }

  std::string atom() {
    static const char* props[] = {"p", "q", "r", "phi", "chi", "psi"};
    switch (pick(3)) {
      case 0: return props[pick(6)];
      case 1: return std::string("(big ") + (pick(2) ? "o1" : "o2") + ")";
      default: return std::string("(red ") + (pick(2) ? "o1" : "o2") + ")";
    }
  }

  void make_gamma() {
    gamma.clear();
    int n = 3 + pick(4);
    for (int i = 0; i < n; ++i) {
      switch (pick(6)) {
        case 0:
        case 1: gamma.push_back(F(atom())); break;
        case 2: gamma.push_back(F("(implies " + atom() + " " + atom() + ")")); break;
        case 3: gamma.push_back(F("(forall (x Obj) (implies (big x) (red x)))")); break;
        case 4: gamma.push_back(F("(K a 1 " + atom() + ")")); break;
        default: gamma.push_back(F("(K a 1 (implies " + atom() + " " + atom() + "))")); break;
      }
    }
    derived = gamma;
  }

  // Applies `steps` random forward rules; returns the last new formula.
  Formula derive(int steps) {
    Formula last = any(derived);
    for (int s = 0; s < steps; ++s) {
      std::optional<Formula> next;
      const Formula a = any(derived);
      switch (pick(7)) {
        case 0: {
          Formula b = any(derived);
          if (a.size() + b.size() < 40) next = Formula::conjunction({a, b});
          break;
        }
        case 1:
          if (a.is(FormulaKind::Implies) &&
              std::find(derived.begin(), derived.end(), a.lhs()) != derived.end())
            next = a.rhs();
          break;
        case 2:
          if (a.size() < 30) next = Formula::disjunction({a, F(atom())});
          break;
        case 3:
          if (a.is(FormulaKind::ForAll))
            next = instantiate(a, Term::constant(pick(2) ? "o1" : "o2", Sort{"Obj"}));
          break;
        case 4:
          if (a.is(FormulaKind::Knows)) next = a.body();
          break;
        case 5:
          if (a.is(FormulaKind::Knows) && a.body().is(FormulaKind::Implies)) {
            Formula need = Formula::modal(FormulaKind::Knows, a.args(), a.body().lhs());
            if (std::find(derived.begin(), derived.end(), need) != derived.end())
              next = Formula::modal(FormulaKind::Knows, {a.agent(), Term::integer(2)}, a.body().rhs());
          }
          break;
        default:
          if (a.is(FormulaKind::And)) next = a.subs()[pick(static_cast<int>(a.subs().size()))];
          break;
      }
      if (next && std::find(derived.begin(), derived.end(), *next) == derived.end()) {
        derived.push_back(*next);
        last = *next;
      }
    }
    return last;
  }
};

}  // namespace fixtures
