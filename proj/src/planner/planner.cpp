#include "tai/planner.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

#include "tai/hash.hpp"
#include "tai/prover/checker.hpp"

namespace tai::planner {

namespace {

long moment(const Term& t) {
  if (t.null() || !t.integer_value()) throw Error("planning needs integer moments, got " + (t.null() ? std::string("nothing") : pretty(t)));
  return *t.integer_value();
}

bool is_can(const Formula& f) {
  return f.is(FormulaKind::Atom) && f.atom_term().is_application() &&
         f.atom_term().name() == sym::can;
}

long index_of(const std::vector<Term>& v, const Term& t) {
  auto it = std::find(v.begin(), v.end(), t);
  return it == v.end() ? -1 : static_cast<long>(it - v.begin());
}

// Catalog atoms restricted to the pool and window.
std::vector<PlanStep> usable_steps(const std::vector<Formula>& catalog, const std::vector<Term>& pool,
                                   long now, long horizon) {
  std::vector<PlanStep> out;
  for (const Formula& f : catalog) {
    if (!is_can(f) || !f.closed()) continue;
    const auto& a = f.atom_term().args();
    if (index_of(pool, a[0]) < 0 || !a[2].integer_value()) continue;
    long t = *a[2].integer_value();
    if (t <= now || t > now + horizon) continue;
    PlanStep s{a[0], a[1], a[2]};
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

std::vector<Formula> usable_catalog(const PlanningProblem& pr) {
  std::vector<Formula> out;
  const Signature& sig = pr.gamma.signature();
  for (const auto& s : usable_steps(pr.catalog, pr.pool, moment(pr.now), pr.horizon))
    out.push_back(can(sig, s.agent, s.action, s.time));
  return out;
}

void push_unique(std::vector<Formula>& v, const Formula& f) {
  if (std::find(v.begin(), v.end(), f) == v.end()) v.push_back(f);
}

}  // namespace

std::vector<Term> Plan::agents() const {
  std::vector<Term> out;
  for (const auto& s : steps)
    if (index_of(out, s.agent) < 0) out.push_back(s.agent);
  return out;
}

std::vector<Formula> Plan::happens_facts(const Signature& sig) const {
  std::vector<Formula> out;
  for (const auto& s : steps) out.push_back(happens(sig, action(sig, s.agent, s.action), s.time));
  return out;
}

std::string Plan::str() const {
  std::ostringstream o;
  o << "[";
  for (std::size_t i = 0; i < steps.size(); ++i)
    o << (i ? ", " : "") << "(" << pretty(steps[i].agent) << " " << pretty(steps[i].action) << " "
      << pretty(steps[i].time) << ")";
  o << "]";
  return o.str();
}

const char* to_string(CatalogMode m) {
  switch (m) {
    case CatalogMode::Gamma: return "gamma";
    case CatalogMode::Knows: return "knows";
    case CatalogMode::Believes: return "believes";
  }
  return "?";
}

const char* to_string(FailureKind k) {
  switch (k) {
    case FailureKind::MissingCan: return "missing-can";
    case FailureKind::Inconsistent: return "inconsistent";
    case FailureKind::GoalNotEntailed: return "goal-not-entailed";
  }
  return "?";
}

std::vector<Formula> build_catalog(const KnowledgeBase& source, CatalogMode mode,
                                   const Term& owner, const std::vector<Term>& pool,
                                   long now, long horizon) {
  const Signature& sig = source.signature();
  std::vector<Formula> found;
  for (const KbEntry& e : source.entries()) {
    Formula f = e.formula;
    if (mode != CatalogMode::Gamma) {
      auto want = mode == CatalogMode::Knows ? FormulaKind::Knows : FormulaKind::Believes;
      if (!f.is(want) || f.agent() != owner) continue;
      f = f.body();
    }
    if (is_can(f) && f.closed()) {
      push_unique(found, f);
      continue;
    }
    // forall t:Moment can(a, x, t)
    if (f.is(FormulaKind::ForAll) && f.var().sort() == sorts::Moment && is_can(f.body())) {
      const auto& a = f.body().atom_term().args();
      if (!a[0].ground() || !a[1].ground() || a[2] != f.var()) continue;
      for (long t = now + 1; t <= now + horizon; ++t) push_unique(found, instantiate(f, Term::integer(t)));
    }
  }
  auto steps = usable_steps(found, pool, now, horizon);

  // Actions rank by declaration, then by name for anything undeclared.
  auto rank = [&](const Term& x) {
    const auto& cs = sig.user_constants();
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (cs[i].first == x.name()) return std::make_pair(static_cast<long>(i), std::string());
    return std::make_pair(static_cast<long>(cs.size()), pretty(x));
  };
  std::stable_sort(steps.begin(), steps.end(), [&](const PlanStep& l, const PlanStep& r) {
    return std::make_tuple(rank(l.action), index_of(pool, l.agent), moment(l.time)) <
           std::make_tuple(rank(r.action), index_of(pool, r.agent), moment(r.time));
  });
  std::vector<Formula> out;
  for (const auto& s : steps) out.push_back(can(sig, s.agent, s.action, s.time));
  return out;
}

Consistency is_consistent_plan(const Plan& p, const KnowledgeBase& gamma, const prover::Budget& budget) {
  long last = moment(p.planning_time);
  for (const auto& s : p.steps) {
    long t = moment(s.time);
    if (t <= last) throw Error("plan steps must strictly increase in time after the planning time");
    last = t;
  }
  const Signature& sig = gamma.signature();
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& s = p.steps[i];
    if (!prover::prove(gamma, can(sig, s.agent, s.action, s.time), budget).ok()) return MissingCan{i};
  }
  auto facts = p.happens_facts(sig);
  auto r = prover::consistent(gamma, facts, budget);
  if (!r.consistent()) return Inconsistent{r.refutation};
  return std::monostate{};
}

prover::ProveResult satisfies(const Plan& p, const KnowledgeBase& gamma, const Formula& g,
                              const prover::Budget& budget) {
  auto facts = p.happens_facts(gamma.signature());
  return prover::prove(gamma.with(facts), g, budget);
}

long candidate_count(const std::vector<Formula>& catalog, const std::vector<Term>& pool, long now,
                     long horizon) {
  auto steps = usable_steps(catalog, pool, now, horizon);
  long total = 1;
  for (long t = now + 1; t <= now + horizon; ++t) {
    long c = std::count_if(steps.begin(), steps.end(),
                           [&](const PlanStep& s) { return moment(s.time) == t; });
    total *= 1 + c;
    if (total > (1L << 40)) return total;  // far past any ceiling
  }
  return total;
}

std::vector<Plan> enumerate(const std::vector<Formula>& catalog, const std::vector<Term>& pool,
                            const Term& now, long horizon, long ceiling) {
  long n = moment(now);
  long expected = candidate_count(catalog, pool, n, horizon);
  if (expected > ceiling) throw HorizonTooLarge(expected, ceiling);

  auto steps = usable_steps(catalog, pool, n, horizon);
  std::vector<Term> actions;
  for (const auto& s : steps)
    if (index_of(actions, s.action) < 0) actions.push_back(s.action);

  std::vector<std::vector<PlanStep>> slots;
  for (long t = n + 1; t <= n + horizon; ++t) {
    slots.emplace_back();
    for (const auto& s : steps)
      if (moment(s.time) == t) slots.back().push_back(s);
  }

  std::vector<Plan> out;
  Plan cur{{}, now};
  std::function<void(std::size_t)> go = [&](std::size_t slot) {
    if (slot == slots.size()) {
      out.push_back(cur);
      return;
    }
    go(slot + 1);
    for (const auto& s : slots[slot]) {
      cur.steps.push_back(s);
      go(slot + 1);
      cur.steps.pop_back();
    }
  };
  go(0);
  if (static_cast<long>(out.size()) != expected)
    throw Error("internal: enumeration produced " + std::to_string(out.size()) + " plans, expected " +
                std::to_string(expected));

  using Key = std::vector<std::tuple<long, long, long>>;
  auto key = [&](const Plan& p) {
    Key k;
    for (const auto& s : p.steps)
      k.emplace_back(index_of(pool, s.agent), index_of(actions, s.action), moment(s.time));
    return k;
  };
  std::vector<std::pair<Key, std::size_t>> order;
  for (std::size_t i = 0; i < out.size(); ++i) order.emplace_back(key(out[i]), i);
  std::sort(order.begin(), order.end(), [](const auto& l, const auto& r) {
    if (l.first.size() != r.first.size()) return l.first.size() < r.first.size();
    return l.first < r.first;
  });
  std::vector<Plan> sorted;
  sorted.reserve(out.size());
  for (const auto& [k, i] : order) sorted.push_back(std::move(out[i]));
  return sorted;
}

KnowledgeBase planning_view(const PlanningProblem& problem) {
  std::vector<Formula> cat;
  for (const Formula& f : problem.catalog)
    if (!problem.gamma.contains(f)) cat.push_back(f);
  return problem.gamma.with(cat, Provenance::derived());
}

SearchResult search(const PlanningProblem& problem) {
  if (!problem.goal.closed()) throw Error("planning goal must be closed");
  KnowledgeBase view = planning_view(problem);
  auto plans = enumerate(problem.catalog, problem.pool, problem.now, problem.horizon, problem.ceiling);

  NonexistenceCertificate cert;
  cert.goal = problem.goal;
  cert.planner = problem.planner;
  cert.pool = problem.pool;
  cert.mode = problem.mode;
  cert.now = problem.now;
  cert.horizon = problem.horizon;
  cert.catalog = usable_catalog(problem);
  cert.budget = problem.budget;
  cert.candidate_count = static_cast<long>(plans.size());

  for (const Plan& p : plans) {
    CandidateFailure fail{p};
    Consistency c = is_consistent_plan(p, view, problem.budget);
    if (auto* m = std::get_if<MissingCan>(&c)) {
      fail.kind = FailureKind::MissingCan;
      fail.step = m->step;
    } else if (auto* inc = std::get_if<Inconsistent>(&c)) {
      fail.kind = FailureKind::Inconsistent;
      fail.refutation = inc->refutation;
    } else {
      auto r = satisfies(p, view, problem.goal, problem.budget);
      if (r.ok()) return Found{p, r.proof};
      fail.kind = FailureKind::GoalNotEntailed;
      fail.exhausted = r.exhausted;
    }
    cert.failures.push_back(std::move(fail));
  }
  if (static_cast<long>(cert.failures.size()) !=
      candidate_count(cert.catalog, cert.pool, moment(cert.now), cert.horizon))
    throw Error("internal: certificate does not cover the enumeration");
  return cert;
}

}  // namespace tai::planner
