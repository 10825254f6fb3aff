#include <algorithm>
#include <cstdio>

#include "tai/agents.hpp"
#include "tai/prover/checker.hpp"
#include "tai/prover/proof_io.hpp"

namespace tai::agents {

using planner::CatalogMode;
using planner::NonexistenceCertificate;
using planner::Plan;

namespace {

// Instantiates leading Moment quantifiers at n.
Formula at_time(Formula f, long n) {
  while (f.is(FormulaKind::ForAll) && f.var().sort() == sorts::Moment) f = instantiate(f, Term::integer(n));
  return f;
}

bool is_happens(const Formula& f) {
  return f.is(FormulaKind::Atom) && f.atom_term().is_application() && f.atom_term().name() == sym::happens;
}

bool is_prohibition(const Formula& f) {
  if (f.is(FormulaKind::ForAll)) return is_prohibition(f.body());
  return f.is(FormulaKind::Not) && is_happens(f.body());
}

bool is_can_fact(const Formula& f) {
  Formula g = f;
  while (g.is(FormulaKind::ForAll) && g.var().sort() == sorts::Moment) g = g.body();
  return g.is(FormulaKind::Atom) && g.atom_term().is_application() && g.atom_term().name() == sym::can;
}

KnowledgeBase view_of(const AgentSpec& a, const World& w) {
  return w.gamma.with(a.store.formulas(), Provenance::derived());
}

// Clause instances of `a` at n: Oughts of a whose condition a believes or knows.
std::vector<std::pair<std::size_t, Formula>> triggered(const AgentSpec& a, const World& w, long n) {
  std::vector<std::pair<std::size_t, Formula>> out;
  KnowledgeBase view = view_of(a, w);
  for (std::size_t i = 0; i < a.contract.size(); ++i) {
    Formula o = at_time(a.contract[i], n);
    if (!o.is(FormulaKind::Ought) || o.agent() != a.id) continue;
    Term t = Term::integer(n);
    Formula b = Formula::modal(FormulaKind::Believes, {a.id, t}, o.condition());
    Formula k = Formula::modal(FormulaKind::Knows, {a.id, t}, o.condition());
    if (prover::prove(view, b, w.config.budget).ok() || prover::prove(view, k, w.config.budget).ok())
      out.emplace_back(i, o);
  }
  return out;
}

std::string artifact_name(const World& w, const std::string& kind, const Term& agent) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", w.transcript.artifacts.size() + 1);
  return std::string(buf) + "-" + kind + "-" + agent.name();
}

std::string add_proof(World& w, const std::string& kind, const Term& agent, const prover::Proof& p,
                      const KnowledgeBase& premises) {
  Artifact a{artifact_name(w, kind, agent), Artifact::Kind::Proof, prover::serialize_proof(p), premises.to_text()};
  w.transcript.artifacts.push_back(a);
  return a.name + a.extension();
}

std::string add_certificate(World& w, const Term& agent, const NonexistenceCertificate& c,
                            const KnowledgeBase& gamma) {
  Artifact a{artifact_name(w, "nonexistence", agent), Artifact::Kind::Certificate,
             planner::serialize_certificate(c), gamma.to_text()};
  w.transcript.artifacts.push_back(a);
  return a.name + a.extension();
}

void log(World& w, std::string kind, const Term& agent, std::vector<std::pair<std::string, std::string>> fields,
         std::vector<std::string> artifacts = {}) {
  w.transcript.events.push_back(
      Event{w.clock, std::move(kind), agent.null() ? std::string() : agent.name(), std::move(fields), std::move(artifacts)});
}

// S(a,t,φ) reaches everyone; S(a,b,t,φ) reaches b.
void deliver(World& w, const Formula& says) {
  auto audience = says.audience();
  for (auto& ag : w.agents) {
    if (audience && *audience != ag.id) continue;
    ag.store.add(Formula::modal(FormulaKind::Believes, {ag.id, says.time()}, says.body()), Provenance::percept());
  }
}

void announce(World& w, const Formula& says) {
  w.gamma.add(says, Provenance::declared());
  w.message_log.push_back(says);
  deliver(w, says);
}

void declare_plan(World& w, std::size_t tau, const Plan& plan, const prover::Proof& proof,
                  const KnowledgeBase& view, const Formula& g) {
  const Signature& sig = w.gamma.signature();
  const Term& id = w.agents[tau].id;
  Formula says = planner::says_plan(sig, id, Term::integer(w.clock), plan, g);
  std::string art = add_proof(w, "plan", id, proof, view.with(plan.happens_facts(sig)));
  announce(w, says);
  std::string agents;
  for (const Term& a : plan.agents()) agents += (agents.empty() ? "" : " ") + a.name();
  log(w, "declare-plan", id, {{"plan", plan.str()}, {"agents", agents}, {"says", pretty(says)}}, {art});
  for (const auto& s : plan.steps) w.pending.push_back({s, tau});
}

void run_level(std::size_t tau, const GoalRecord& goal, World& w, CatalogMode mode) {
  const Term id = w.agents[tau].id;
  const long n = w.clock;
  const Signature& sig = w.gamma.signature();

  // Obligations in force now; moral ones may set legal ones aside.
  std::vector<Formula> oughts;
  for (const auto& [i, o] : triggered(w.agents[tau], w, n)) oughts.push_back(o);
  std::vector<Suspension> susp;
  try {
    resolve_obligations(w.agents[tau], oughts, w.gamma, w.config.budget, &susp);
  } catch (const UnresolvedConflict& e) {
    log(w, "conflict", id, {{"reason", e.what()}});
    throw;
  }
  for (const auto& s : susp) {
    auto& done = w.suspended[tau];
    if (std::find(done.begin(), done.end(), s.legal) != done.end()) continue;
    done.push_back(s.legal);
    KnowledgeBase premises(w.gamma.signature_ptr());
    for (const Formula& f : s.premises) premises.add(f);
    std::string art = add_proof(w, "suspension", id, s.refutation, premises);
    log(w, "suspend", id, {{"legal", pretty(s.legal)}, {"overridden-by", pretty(s.moral)}}, {art});
  }
  std::vector<Formula> constraints;  // and capability attitudes, below
  for (const Formula& o : oughts) {
    const auto& done = w.suspended[tau];
    if (is_prohibition(o.body()) && std::find(done.begin(), done.end(), o) == done.end())
      constraints.push_back(o.body());
  }
  // The planner's capability attitudes travel with the premises so that a
  // certificate's catalog can be rebuilt from its premises alone.
  for (const Formula& f : w.agents[tau].store.formulas()) {
    auto kind = mode == CatalogMode::Knows ? FormulaKind::Knows : FormulaKind::Believes;
    if (f.is(kind) && f.agent() == id && is_can_fact(f.body())) constraints.push_back(f);
  }
  KnowledgeBase gamma = w.gamma.with(constraints, Provenance::derived());

  auto problem = [&](std::vector<Term> pool) {
    planner::PlanningProblem p;
    p.gamma = gamma;
    p.planner = id;
    p.goal = goal.goal;
    p.now = Term::integer(n);
    p.horizon = w.config.horizon;
    p.pool = pool;
    p.catalog = planner::build_catalog(gamma, mode, id, pool, n, w.config.horizon);
    p.mode = mode;
    p.budget = w.config.budget;
    p.ceiling = w.config.ceiling;
    return p;
  };

  auto solo_problem = problem({id});
  auto solo = planner::search(solo_problem);
  if (auto* f = std::get_if<planner::Found>(&solo)) {
    declare_plan(w, tau, f->plan, f->proof, planner::planning_view(solo_problem), goal.goal);
    return;
  }
  const auto& cert = std::get<NonexistenceCertificate>(solo);
  if (!planner::verify_certificate(cert, gamma, false)) throw Error("internal: solo certificate does not verify");
  std::string art = add_certificate(w, id, cert, gamma);
  Formula none = planner::says_no_plan(sig, id, Term::integer(n), {id}, n + w.config.horizon, goal.goal);
  announce(w, none);
  log(w, "declare-no-solo-plan", id,
      {{"candidates", std::to_string(cert.candidate_count)}, {"says", pretty(none)}}, {art});

  auto joint_problem = problem(w.agent_ids());
  auto joint = planner::search(joint_problem);
  if (auto* f = std::get_if<planner::Found>(&joint)) {
    declare_plan(w, tau, f->plan, f->proof, planner::planning_view(joint_problem), goal.goal);
    return;
  }
  const auto& full = std::get<NonexistenceCertificate>(joint);
  std::string full_art = add_certificate(w, id, full, gamma);
  log(w, "episode-failed", id, {{"goal", pretty(goal.goal)}, {"candidates", std::to_string(full.candidate_count)}},
      {full_art});
  throw EpisodeFailed("no plan for " + pretty(goal.goal) + " within horizon " + std::to_string(w.config.horizon), full);
}

void execute_due(World& w) {
  const Signature& sig = w.gamma.signature();
  std::vector<PlannedStep> later;
  for (const PlannedStep& ps : w.pending) {
    if (ps.step.time.integer_value() != w.clock) {
      later.push_back(ps);
      continue;
    }
    Plan single{{ps.step}, Term::integer(w.clock - 1)};
    auto c = planner::is_consistent_plan(single, w.gamma, w.config.budget);
    Formula h = single.happens_facts(sig).front();
    if (planner::is_yes(c)) {
      w.gamma.add(h, Provenance::derived());
      log(w, "execute", ps.step.agent, {{"happens", pretty(h)}});
    } else if (std::holds_alternative<planner::MissingCan>(c)) {
      log(w, "divergence", ps.step.agent,
          {{"happens", pretty(h)}, {"reason", "can " + pretty(can(sig, ps.step.agent, ps.step.action, ps.step.time)) + " not provable from the world"}});
    } else {
      const auto& inc = std::get<planner::Inconsistent>(c);
      std::string art = add_proof(w, "divergence", ps.step.agent, inc.refutation, w.gamma.with(std::vector<Formula>{h}));
      log(w, "divergence", ps.step.agent, {{"happens", pretty(h)}, {"reason", "inconsistent with the world"}}, {art});
    }
  }
  w.pending = std::move(later);
}

void pursue(World& w, std::size_t i, const GoalRecord& g) {
  AgentSpec& a = w.agents[i];
  if (g.goal.is(FormulaKind::Says) && g.goal.agent() == a.id) {
    announce(w, g.goal);
    log(w, "say", a.id, {{"says", pretty(g.goal)}});
    return;
  }
  try {
    if (a.mode == Mode::Level1)
      run_level1(i, g, w);
    else
      run_level2(i, g, w);
  } catch (const EpisodeFailed&) {
    if (a.mode == Mode::Level2 && !w.retry[i]) w.retry[i] = g;
  } catch (const UnresolvedConflict&) {
  }
}

}  // namespace

const char* to_string(Mode m) { return m == Mode::Level1 ? "level1" : "level2"; }

std::size_t World::index_of(const Term& agent) const {
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i].id == agent) return i;
  throw UnknownSymbol(agent.null() ? "?" : agent.name());
}

std::vector<Term> World::agent_ids() const {
  std::vector<Term> out;
  for (const auto& a : agents) out.push_back(a.id);
  return out;
}

World make_world(const Scenario& s) {
  World w;
  w.gamma = s.gamma;
  w.clock = s.config.start;
  w.agents = s.agents;
  w.config = s.config;
  w.schedule = s.schedule;
  for (auto& a : w.agents) {
    if (a.mode != Mode::Level1) continue;
    for (const KbEntry& e : w.gamma.entries())
      if (is_can_fact(e.formula))
        a.store.add(Formula::modal(FormulaKind::Knows, {a.id, Term::integer(s.config.start)}, e.formula));
  }
  for (const auto& a : w.agents) w.fired.emplace_back(a.contract.size(), false);
  w.suspended.resize(w.agents.size());
  w.retry.resize(w.agents.size());
  w.observed.resize(w.agents.size(), false);
  return w;
}

std::optional<GoalRecord> generate_goal(const AgentSpec& a, const World& w) {
  const long n = w.clock;
  std::size_t idx = w.index_of(a.id);
  auto instances = triggered(a, w, n);
  std::vector<Formula> binding;
  for (const auto& [i, o] : instances)
    if (!is_prohibition(o.body())) binding.push_back(o.body());
  for (const auto& [i, o] : instances) {
    if (w.fired[idx][i] || is_prohibition(o.body())) continue;
    const Formula& g = o.body();
    if (prover::prove(w.gamma, g, w.config.budget).ok()) continue;  // not threatened
    Formula all = binding.size() == 1 ? binding.front() : Formula::conjunction(binding);
    Formula just = Formula::modal(FormulaKind::Believes, {a.id, Term::integer(n)},
                                  Formula::implication(Formula::negation(g), Formula::negation(all)));
    auto r = prover::prove(a.store, just, w.config.budget);
    if (!r.ok()) continue;
    return GoalRecord{a.id, n, g, just, r.proof, w.config.delta, i};
  }
  return std::nullopt;
}

void run_level1(std::size_t tau, const GoalRecord& goal, World& w) {
  if (w.agents.at(tau).mode != Mode::Level1) throw Error("run_level1 needs a level1 agent");
  run_level(tau, goal, w, CatalogMode::Knows);
}

void run_level2(std::size_t tau, const GoalRecord& goal, World& w) {
  if (w.agents.at(tau).mode != Mode::Level2) throw Error("run_level2 needs a level2 agent");
  run_level(tau, goal, w, CatalogMode::Believes);
}

AgentSpec observe(AgentSpec tau, const Formula& evidence, long now) {
  Formula body = evidence;
  while (body.is(FormulaKind::ForAll)) body = body.body();
  bool contract = body.is(FormulaKind::Ought) && body.agent() != tau.id;
  if (!is_can_fact(evidence) && !contract)
    throw SortError("capability or contract evidence", pretty(evidence));
  tau.store.add(Formula::modal(FormulaKind::Believes, {tau.id, Term::integer(now)}, evidence), Provenance::percept());
  return tau;
}

std::vector<Formula> resolve_obligations(const AgentSpec& a, const std::vector<Formula>& oughts,
                                         const KnowledgeBase& gamma, const prover::Budget& budget,
                                         std::vector<Suspension>* log) {
  (void)a;
  std::vector<Formula> morals, legals;
  for (const Formula& o : oughts) {
    if (!o.is(FormulaKind::Ought)) throw Error("not an obligation: " + pretty(o));
    if (o.flavor() == Flavor::Moral) morals.push_back(o);
    if (o.flavor() == Flavor::Legal) legals.push_back(o);
  }
  auto alone_ok = [&](const Formula& x) {
    std::vector<Formula> one{x};
    return prover::consistent(gamma, one, budget).consistent();
  };
  for (std::size_t i = 0; i < morals.size(); ++i)
    for (std::size_t j = i + 1; j < morals.size(); ++j) {
      std::vector<Formula> both{morals[i].body(), morals[j].body()};
      if (alone_ok(both[0]) && alone_ok(both[1]) && !prover::consistent(gamma, both, budget).consistent())
        throw UnresolvedConflict("moral obligations conflict: " + pretty(morals[i]) + " and " + pretty(morals[j]));
    }
  std::vector<Formula> out;
  for (const Formula& o : oughts) {
    bool drop = false;
    if (o.flavor() == Flavor::Legal && alone_ok(o.body())) {
      for (const Formula& m : morals) {
        std::vector<Formula> both{m.body(), o.body()};
        if (!alone_ok(m.body())) continue;
        auto r = prover::consistent(gamma, both, budget);
        if (r.consistent()) continue;
        drop = true;
        if (log) {
          std::vector<Formula> premises = gamma.formulas();
          premises.insert(premises.end(), both.begin(), both.end());
          log->push_back({m, o, r.refutation, premises});
        }
        break;
      }
    }
    if (!drop) out.push_back(o);
  }
  return out;
}

void step_world(World& w) {
  ++w.clock;
  const long n = w.clock;
  execute_due(w);

  for (const Scheduled& s : w.schedule) {
    if (s.tick != n) continue;
    std::size_t i = w.index_of(s.agent);
    switch (s.kind) {
      case Scheduled::Kind::Percept: {
        Term t = Term::integer(n);
        w.gamma.add(Formula::modal(FormulaKind::Perceives, {s.agent, t}, s.formula), Provenance::percept());
        w.agents[i].store.add(Formula::modal(FormulaKind::Believes, {s.agent, t}, s.formula), Provenance::percept());
        log(w, "percept", s.agent, {{"formula", pretty(s.formula)}});
        break;
      }
      case Scheduled::Kind::Message:
        announce(w, s.formula);
        log(w, "message", s.agent, {{"says", pretty(s.formula)}});
        break;
      case Scheduled::Kind::Observe:
        try {
          w.agents[i] = observe(w.agents[i], s.formula, n);
          w.observed[i] = true;
          log(w, "observe", s.agent, {{"evidence", pretty(s.formula)}});
        } catch (const SortError& e) {
          log(w, "observe-rejected", s.agent, {{"evidence", pretty(s.formula)}, {"reason", e.what()}});
        }
        break;
    }
  }

  for (std::size_t i = 0; i < w.agents.size(); ++i) {
    if (w.retry[i] && w.observed[i]) {
      GoalRecord g = *w.retry[i];
      log(w, "retry", w.agents[i].id, {{"goal", pretty(g.goal)}});
      try {
        run_level2(i, g, w);
      } catch (const EpisodeFailed&) {
      } catch (const UnresolvedConflict&) {
      }
      w.retry[i].reset();
    }
    while (auto g = generate_goal(w.agents[i], w)) {
      w.fired[i][g->clause] = true;
      std::string art = add_proof(w, "justification", w.agents[i].id, g->justification_proof, w.agents[i].store);
      w.agents[i].store.add(g->justification, Provenance::derived());
      log(w, "goal", w.agents[i].id,
          {{"goal", pretty(g->goal)}, {"justification", pretty(g->justification)},
           {"deadline", std::to_string(g->time + g->delta)}},
          {art});
      pursue(w, i, *g);
    }
  }
  std::fill(w.observed.begin(), w.observed.end(), false);
}

Transcript run(const Scenario& s) {
  World w = make_world(s);
  for (long k = 0; k < s.config.ticks; ++k) step_world(w);
  return w.transcript;
}

}  // namespace tai::agents
