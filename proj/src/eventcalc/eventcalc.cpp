#include "tai/eventcalc.hpp"

#include <algorithm>

#include "tai/parser.hpp"

namespace tai::ec {

namespace {

const char* kAxiomText[][2] = {
    {"ec-initially",
     "(forall (f Fluent) (implies (initially f) (holds f 0)))"},
    {"ec-initiation",
     "(forall (e Event) (forall (f Fluent) (forall (t Moment) "
     "(implies (and (happens e t) (initiates e f t)) (holds f (next t))))))"},
    {"ec-inertia",
     "(forall (f Fluent) (forall (t Moment) "
     "(implies (and (holds f t) (not (clipped t f (next t)))) (holds f (next t)))))"},
    {"ec-clipping",
     "(forall (e Event) (forall (f Fluent) (forall (t Moment) "
     "(implies (and (happens e t) (terminates e f t)) (clipped t f (next t))))))"},
    {"can",
     "(forall (a Agent) (forall (x ActionType) (forall (t Moment) "
     "(implies (not (can a x t)) (not (happens (action a x) t))))))"},
};

long integer_time(const Term& t) {
  if (!t.integer_value()) throw UnorderedMoment(pretty(t));
  return *t.integer_value();
}

void push_unique(std::vector<Term>& v, const Term& t) {
  if (std::find(v.begin(), v.end(), t) == v.end()) v.push_back(t);
}

}  // namespace

const std::vector<Axiom>& axioms() {
  static const std::vector<Axiom> set = [] {
    Signature sig;
    std::vector<Axiom> out;
    for (const auto& [label, text] : kAxiomText)
      out.push_back(Axiom{label, parse_formula(text, sig)});
    return out;
  }();
  return set;
}

std::vector<Formula> axiom_formulas() {
  std::vector<Formula> out;
  for (const Axiom& a : axioms()) out.push_back(a.formula);
  return out;
}

Narrative Narrative::from_formulas(std::span<const Formula> fs) {
  Narrative n;
  for (const Formula& f : fs) {
    if (!f.is(FormulaKind::Atom) || !f.closed()) continue;
    const Term& a = f.atom_term();
    if (!a.is_application()) continue;
    const auto& x = a.args();
    if (a.name() == sym::happens) n.happens.push_back({x[0], x[1]});
    else if (a.name() == sym::initiates) n.initiates.push_back({x[0], x[1], x[2]});
    else if (a.name() == sym::terminates) n.terminates.push_back({x[0], x[1], x[2]});
    else if (a.name() == sym::initially) n.initially.push_back(x[0]);
  }
  return n;
}

std::vector<Formula> Narrative::facts(const Signature& sig) const {
  std::vector<Formula> out;
  auto atom = [&](const char* name, std::vector<Term> args) {
    out.push_back(Formula::atom(Term::apply(sig, sig.function(name), std::move(args))));
  };
  for (const auto& h : happens) atom(sym::happens, {h.event, h.time});
  for (const auto& e : initiates) atom(sym::initiates, {e.event, e.fluent, e.time});
  for (const auto& e : terminates) atom(sym::terminates, {e.event, e.fluent, e.time});
  for (const auto& f : initially) atom(sym::initially, {f});
  return out;
}

std::vector<Term> Narrative::fluents() const {
  std::vector<Term> out;
  for (const auto& e : initiates) push_unique(out, e.fluent);
  for (const auto& e : terminates) push_unique(out, e.fluent);
  for (const auto& f : initially) push_unique(out, f);
  return out;
}

std::vector<Formula> Narrative::completion(const Signature& sig, long horizon) const {
  std::vector<Formula> out;
  auto clipped = sig.function(sym::clipped);
  for (const Term& f : fluents()) {
    for (long k = 0; k < horizon; ++k) {
      bool clips = std::any_of(happens.begin(), happens.end(), [&](const Happening& h) {
        return h.time.integer_value() == k &&
               std::any_of(terminates.begin(), terminates.end(), [&](const Effect& e) {
                 return e.event == h.event && e.fluent == f && e.time == h.time;
               });
      });
      if (clips) continue;
      out.push_back(Formula::negation(Formula::atom(Term::apply(
          sig, clipped, {Term::integer(k), f, Term::integer(k + 1)}))));
    }
  }
  return out;
}

bool project(const Narrative& n, const Term& fluent, const Term& t) {
  long target = integer_time(t);
  for (const auto& h : n.happens) integer_time(h.time);
  if (target < 0) return false;

  bool on = std::find(n.initially.begin(), n.initially.end(), fluent) != n.initially.end();
  auto fires = [&](const std::vector<Narrative::Effect>& effects, long k) {
    for (const auto& h : n.happens) {
      if (*h.time.integer_value() != k) continue;
      for (const auto& e : effects)
        if (e.event == h.event && e.fluent == fluent && e.time == h.time) return true;
    }
    return false;
  };
  for (long k = 0; k < target; ++k) {
    bool init = fires(n.initiates, k);
    bool term = fires(n.terminates, k);
    on = (on && !term) || init;
  }
  return on;
}

}  // namespace tai::ec
