#include "tai/planner.hpp"

namespace tai::planner {

namespace {

bool applies(const Term& t, const char* name, std::size_t arity) {
  return t.is_application() && t.name() == name && t.args().size() == arity;
}

}  // namespace

Term reify(const Signature& sig, const Plan& p) {
  Term t = Term::apply(sig, sig.function(sym::plan_empty), {p.planning_time});
  for (const auto& s : p.steps)
    t = Term::apply(sig, sig.function(sym::plan_then), {t, s.agent, s.action, s.time});
  return t;
}

Plan interpret(const Term& t) {
  if (t.null() || t.sort() != sorts::Plan) throw MalformedPlanTerm("not a Plan term");
  std::vector<PlanStep> rev;
  Term cur = t;
  while (applies(cur, sym::plan_then, 4)) {
    const auto& a = cur.args();
    if (!a[1].ground() || !a[2].ground() || !a[3].ground())
      throw MalformedPlanTerm("plan step is not ground: " + pretty(cur));
    rev.push_back({a[1], a[2], a[3]});
    cur = a[0];
  }
  if (!applies(cur, sym::plan_empty, 1)) throw MalformedPlanTerm("plan term does not end in plan-empty: " + pretty(cur));
  Plan p{{rev.rbegin(), rev.rend()}, cur.args()[0]};
  Term last = p.planning_time;
  for (const auto& s : p.steps) {
    if (last.integer_value() && s.time.integer_value() && *s.time.integer_value() <= *last.integer_value())
      throw MalformedPlanTerm("plan steps out of time order at " + pretty(s.time));
    last = s.time;
  }
  return p;
}

Term agent_list(const Signature& sig, const std::vector<Term>& agents) {
  Term t = Term::constant(sym::agents_nil, sorts::AgentList);
  for (auto it = agents.rbegin(); it != agents.rend(); ++it)
    t = Term::apply(sig, sig.function(sym::agents_cons), {*it, t});
  return t;
}

Formula plan_claim(const Signature& sig, const Plan& p, const Formula& g) {
  Term rho = reify(sig, p);
  Formula is_plan = Formula::atom(Term::apply(sig, sig.function(sym::plan), {rho, agent_list(sig, p.agents())}));
  Formula exec = Formula::atom(Term::apply(sig, sig.function(sym::executed), {rho}));
  return Formula::conjunction({is_plan, Formula::implication(exec, g)});
}

Formula says_plan(const Signature& sig, const Term& speaker, const Term& t, const Plan& p,
                  const Formula& g) {
  return Formula::modal(FormulaKind::Says, {speaker, t}, plan_claim(sig, p, g));
}

Formula says_no_plan(const Signature& sig, const Term& speaker, const Term& t,
                     const std::vector<Term>& pool, long last_moment, const Formula& g) {
  Term rho = Term::variable("rho", sorts::Plan);
  Formula body = Formula::conjunction({
      Formula::atom(Term::apply(sig, sig.function(sym::plan), {rho, agent_list(sig, pool)})),
      Formula::atom(Term::apply(sig, sig.function(sym::within), {rho, Term::integer(last_moment)})),
      Formula::implication(Formula::atom(Term::apply(sig, sig.function(sym::executed), {rho})), g),
  });
  return Formula::modal(FormulaKind::Says, {speaker, t}, Formula::negation(Formula::exists(rho, body)));
}

}  // namespace tai::planner
