#include "tai/prover/checker.hpp"

#include <map>

#include "tai/errors.hpp"
#include "tai/moment_order.hpp"

namespace tai::prover {

namespace {

using Live = std::map<int, Formula>;

struct Failure {
  std::size_t node;
  std::string reason;
};

class Checker {
 public:
  Checker(const Signature& sig, std::span<const Formula> gamma)
      : sig_(sig), gamma_(gamma), order_(gamma) {}

  std::optional<Failure> run(const ProofNode& n, const Live& live,
                             bool gamma_visible) {
    std::vector<Live> child_live(n.premises.size(), live);
    std::vector<bool> child_gamma(n.premises.size(), gamma_visible);
    std::string setup_error = scope_children(n, live, child_live, child_gamma);

    for (std::size_t i = 0; i < n.premises.size(); ++i) {
      if (!n.premises[i]) return fail("missing premise");
      if (auto f = run(*n.premises[i], child_live[i], child_gamma[i])) return f;
    }
    std::size_t id = counter_++;
    if (!setup_error.empty()) return Failure{id, setup_error};
    std::string why = verify(n, live, gamma_visible);
    if (!why.empty()) return Failure{id, why};
    return std::nullopt;
  }

 private:
  std::optional<Failure> fail(std::string why) {
    return Failure{counter_++, std::move(why)};
  }

  // Live assumptions each premise may cite. Returns an error for malformed
  // discharge lists; the node itself is then rejected.
  std::string scope_children(const ProofNode& n, const Live&,
                             std::vector<Live>& out, std::vector<bool>& gv) {
    auto bind = [&](Live& l, int label, const Formula& f) -> std::string {
      if (l.count(label)) return "assumption label " + std::to_string(label) + " reused";
      l.emplace(label, f);
      return {};
    };
    const auto& ps = n.premises;
    const auto& ds = n.discharged;
    const Formula& c = n.conclusion;
    switch (n.rule) {
      case Rule::ImpI:
        if (ds.size() != 1 || ps.size() != 1 || !c.is(FormulaKind::Implies))
          return "ImpI shape";
        return bind(out[0], ds[0], c.lhs());
      case Rule::NotI:
        if (ds.size() != 1 || ps.size() != 1 || !c.is(FormulaKind::Not))
          return "NotI shape";
        return bind(out[0], ds[0], c.body());
      case Rule::OrE: {
        if (ps.empty() || !ps[0]) return "OrE shape";
        const Formula& d = ps[0]->conclusion;
        if (!d.is(FormulaKind::Or) || d.subs().size() + 1 != ps.size() ||
            ds.size() != d.subs().size())
          return "OrE shape";
        for (std::size_t i = 0; i < ds.size(); ++i)
          if (auto e = bind(out[i + 1], ds[i], d.subs()[i]); !e.empty()) return e;
        return {};
      }
      case Rule::ExistsE: {
        if (ps.size() != 2 || ds.size() != 1 || !ps[0] || n.term.null())
          return "ExistsE shape";
        const Formula& q = ps[0]->conclusion;
        if (!q.is(FormulaKind::Exists)) return "ExistsE premise is not existential";
        return bind(out[1], ds[0], instantiate(q, n.term));
      }
      case Rule::IK:
      case Rule::IB: {
        if (ps.empty() || ds.size() + 1 != ps.size()) return "attitude rule shape";
        Live inner;
        for (std::size_t i = 0; i < ds.size(); ++i) {
          if (!ps[i]) return "missing premise";
          const Formula& att = ps[i]->conclusion;
          if (att.null() || !att.is_modal() || att.subs().empty())
            return "attitude premise is not modal";
          if (auto e = bind(inner, ds[i], att.body()); !e.empty()) return e;
        }
        out.back() = std::move(inner);
        gv.back() = false;
        return {};
      }
      default:
        return {};
    }
  }

  // Side data a rule does not consume makes the node malformed.
  static std::string stray_side_data(const ProofNode& n) {
    Rule r = n.rule;
    bool discharges = r == Rule::ImpI || r == Rule::NotI || r == Rule::OrE ||
                      r == Rule::ExistsE || r == Rule::IK || r == Rule::IB;
    bool uses_term = r == Rule::ForallI || r == Rule::ForallE ||
                     r == Rule::ExistsI || r == Rule::ExistsE;
    bool uses_times = r == Rule::IK || r == Rule::IB || r == Rule::I13;
    if (!discharges && !n.discharged.empty()) return "rule discharges nothing";
    if (!uses_term && !n.term.null()) return "rule takes no term";
    if (uses_term && n.term.null()) return "missing term";
    if (!uses_times && (!n.time_from.null() || !n.time_to.null()))
      return "rule takes no time pair";
    if (r != Rule::Hyp && n.hyp_label != -1) return "assumption label on a non-leaf";
    return {};
  }

  bool is_eigen(const Term& t) const {
    return !t.null() && t.is_constant() && !t.name().empty() &&
           t.name()[0] == '_';
  }

  bool fresh(const std::string& c, const Live& live,
             std::initializer_list<const Formula*> also) const {
    for (const Formula& g : gamma_)
      if (formula_contains_constant(g, c)) return false;
    for (const auto& [_, f] : live)
      if (formula_contains_constant(f, c)) return false;
    for (const Formula* f : also)
      if (formula_contains_constant(*f, c)) return false;
    return true;
  }

  bool term_fits(const Term& t, const Term& var) const {
    return !t.null() && t.ground() && sig_.is_subsort(t.sort(), var.sort());
  }

  std::string verify(const ProofNode& n, const Live& live, bool gamma_visible) {
    const Formula& c = n.conclusion;
    if (c.null()) return "empty conclusion";
    if (c.has_metavariables()) return "conclusion contains a metavariable";
    if (!c.closed()) return "conclusion has free variables";
    try {
      sort_check(sig_, c);
    } catch (const Error& e) {
      return std::string("ill-sorted conclusion: ") + e.what();
    }
    if (std::string e = stray_side_data(n); !e.empty()) return e;
    const auto& ps = n.premises;
    auto P = [&](std::size_t i) -> const Formula& { return ps[i]->conclusion; };
    auto arity = [&](std::size_t k) { return ps.size() == k; };

    switch (n.rule) {
      case Rule::Hyp: {
        if (!ps.empty()) return "HYP has premises";
        if (n.hyp_label < 0) {
          if (!gamma_visible) return "premise set not visible here";
          for (const Formula& g : gamma_)
            if (g == c) return {};
          return "not a member of the premise set";
        }
        auto it = live.find(n.hyp_label);
        if (it == live.end()) return "assumption not live";
        if (it->second != c) return "assumption does not match";
        return {};
      }
      case Rule::Reiteration:
        if (!arity(1) || P(0) != c) return "reiteration mismatch";
        return {};
      case Rule::AndI:
        if (!c.is(FormulaKind::And) || c.subs().size() != ps.size())
          return "AndI arity";
        for (std::size_t i = 0; i < ps.size(); ++i)
          if (P(i) != c.subs()[i]) return "AndI premise mismatch";
        return {};
      case Rule::AndE:
        if (!arity(1) || !P(0).is(FormulaKind::And)) return "AndE premise";
        for (const Formula& s : P(0).subs())
          if (s == c) return {};
        return "AndE conclusion is not a conjunct";
      case Rule::OrI:
        if (!arity(1) || !c.is(FormulaKind::Or)) return "OrI shape";
        for (const Formula& s : c.subs())
          if (s == P(0)) return {};
        return "OrI premise is not a disjunct";
      case Rule::OrE:
        for (std::size_t i = 1; i < ps.size(); ++i)
          if (P(i) != c) return "OrE case conclusion mismatch";
        return {};
      case Rule::ImpI:
        if (P(0) != c.rhs()) return "ImpI consequent mismatch";
        return {};
      case Rule::ImpE:
        if (!arity(2) || !P(0).is(FormulaKind::Implies)) return "ImpE shape";
        if (P(0).lhs() != P(1)) return "ImpE antecedent mismatch";
        if (P(0).rhs() != c) return "ImpE consequent mismatch";
        return {};
      case Rule::NotI:
        if (!P(0).is(FormulaKind::False)) return "NotI premise is not false";
        return {};
      case Rule::NotE:
        if (!arity(2) || !c.is(FormulaKind::False) ||
            !P(0).is(FormulaKind::Not) || P(0).body() != P(1))
          return "NotE shape";
        return {};
      case Rule::FalseE:
        if (!arity(1) || !P(0).is(FormulaKind::False)) return "FalseE premise";
        return {};
      case Rule::DNE:
        if (!arity(1) || !P(0).is(FormulaKind::Not) ||
            !P(0).body().is(FormulaKind::Not) || P(0).body().body() != c)
          return "DNE shape";
        return {};
      case Rule::ForallI:
        if (!arity(1) || !c.is(FormulaKind::ForAll)) return "ForallI shape";
        if (!is_eigen(n.term) || n.term.sort() != c.var().sort())
          return "ForallI needs an eigenconstant of the bound sort";
        if (!fresh(n.term.name(), live, {&c}))
          return "eigenconstant " + n.term.name() + " is not fresh";
        if (P(0) != instantiate(c, n.term)) return "ForallI body mismatch";
        return {};
      case Rule::ForallE:
        if (!arity(1) || !P(0).is(FormulaKind::ForAll)) return "ForallE shape";
        if (!term_fits(n.term, P(0).var())) return "ForallE instance ill-sorted";
        if (instantiate(P(0), n.term) != c) return "ForallE instance mismatch";
        return {};
      case Rule::ExistsI:
        if (!arity(1) || !c.is(FormulaKind::Exists)) return "ExistsI shape";
        if (!term_fits(n.term, c.var())) return "ExistsI witness ill-sorted";
        if (instantiate(c, n.term) != P(0)) return "ExistsI witness mismatch";
        return {};
      case Rule::ExistsE:
        if (!is_eigen(n.term) || n.term.sort() != P(0).var().sort())
          return "ExistsE needs an eigenconstant of the bound sort";
        if (!fresh(n.term.name(), live, {&c, &P(0)}))
          return "eigenconstant " + n.term.name() + " is not fresh";
        if (P(1) != c) return "ExistsE conclusion mismatch";
        return {};
      case Rule::IK:
      case Rule::IB: {
        FormulaKind k = n.rule == Rule::IK ? FormulaKind::Knows : FormulaKind::Believes;
        if (!c.is(k)) return "attitude conclusion has the wrong operator";
        if (n.time_from.null() || n.time_to.null()) return "missing time pair";
        if (n.time_to != c.time()) return "time pair does not match conclusion";
        if (!order_.less_equal(n.time_from, n.time_to))
          return "time side-condition t1 <= t2 fails";
        for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
          const Formula& a = P(i);
          if (!a.is(k) || a.agent() != c.agent() || a.time() != n.time_from)
            return "attitude premise does not match agent and t1";
        }
        if (P(ps.size() - 1) != c.body()) return "inner proof concludes something else";
        return {};
      }
      case Rule::I4:
        if (!arity(1) || !P(0).is(FormulaKind::Knows) || P(0).body() != c)
          return "I4 shape";
        return {};
      case Rule::I13:
        if (!arity(1) || !c.is(FormulaKind::Perceives) ||
            !P(0).is(FormulaKind::Intends))
          return "I13 shape";
        if (P(0).agent() != c.agent() || P(0).body() != c.body())
          return "I13 agent or content mismatch";
        if (n.time_from != P(0).time() || n.time_to != c.time())
          return "I13 time pair mismatch";
        if (!order_.less(n.time_from, n.time_to))
          return "time side-condition t < t' fails";
        return {};
      case Rule::I14: {
        if (!arity(3) || !c.is(FormulaKind::Knows) ||
            !c.body().is(FormulaKind::Intends))
          return "I14 shape";
        const Term& a = c.agent();
        const Term& t = c.time();
        const Formula& in = c.body();
        if (in.agent() != a || in.time() != t) return "I14 intention agent/time";
        const Formula& o = P(2);
        if (!o.is(FormulaKind::Ought) || o.agent() != a || o.time() != t ||
            o.body() != in.body())
          return "I14 obligation mismatch";
        auto belief = [&](const Formula& body) {
          return Formula::modal(FormulaKind::Believes, {a, t}, body);
        };
        if (P(0) != belief(o.condition())) return "I14 condition belief mismatch";
        if (P(1) != belief(o)) return "I14 obligation belief mismatch";
        return {};
      }
    }
    return "unknown rule";
  }

  const Signature& sig_;
  std::span<const Formula> gamma_;
  MomentOrder order_;
  std::size_t counter_ = 0;
};

}  // namespace

CheckResult check(const Proof& p, const Signature& sig,
                  std::span<const Formula> gamma,
                  const std::optional<Formula>& expected) {
  if (!p) return {false, 0, "empty proof"};
  Checker c(sig, gamma);
  if (auto f = c.run(*p, {}, true)) return {false, f->node, f->reason};
  if (expected && !(p->conclusion == *expected))
    return {false, proof_size(p) - 1, "root does not conclude the goal"};
  return {};
}

CheckResult check(const Proof& p, const KnowledgeBase& gamma,
                  const std::optional<Formula>& expected) {
  auto fs = gamma.formulas();
  return check(p, gamma.signature(), fs, expected);
}

}  // namespace tai::prover
