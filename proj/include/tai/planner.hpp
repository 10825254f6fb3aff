#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tai/errors.hpp"
#include "tai/knowledge_base.hpp"
#include "tai/prover/proof.hpp"
#include "tai/prover/prover.hpp"

namespace tai::planner {

class HorizonTooLarge : public Error {
 public:
  HorizonTooLarge(long count, long ceiling)
      : Error("enumeration of " + std::to_string(count) +
              " candidate plans exceeds the ceiling of " + std::to_string(ceiling)),
        count(count) {}
  long count;
};

class MalformedPlanTerm : public Error {
 public:
  using Error::Error;
};

struct PlanStep {
  Term agent;
  Term action;  // ActionType
  Term time;
  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

struct Plan {
  std::vector<PlanStep> steps;
  Term planning_time;

  /// Distinct agents in first-appearance order.
  std::vector<Term> agents() const;
  std::vector<Formula> happens_facts(const Signature& sig) const;
  std::string str() const;
  friend bool operator==(const Plan&, const Plan&) = default;
};

/// Where the planner's can facts come from.
enum class CatalogMode { Gamma, Knows, Believes };
const char* to_string(CatalogMode m);

struct PlanningProblem {
  KnowledgeBase gamma;
  Term planner;
  Formula goal;
  Term now;  // integer moment
  long horizon = 3;
  std::vector<Term> pool;
  /// Ground can(a, x, t) atoms; only those with a in pool and now < t <= now+horizon count.
  std::vector<Formula> catalog;
  CatalogMode mode = CatalogMode::Gamma;
  prover::Budget budget;
  long ceiling = 100'000;
};

/// Can facts available to `owner` at `now`: ground can atoms or can atoms
/// quantified over time only, read from `source` directly (Gamma) or under
/// K/B of the owner. Instantiated over the window and restricted to `pool`.
std::vector<Formula> build_catalog(const KnowledgeBase& source, CatalogMode mode,
                                   const Term& owner, const std::vector<Term>& pool,
                                   long now, long horizon);

struct MissingCan {
  std::size_t step;
};
struct Inconsistent {
  prover::Proof refutation;
};
using Consistency = std::variant<std::monostate, MissingCan, Inconsistent>;
inline bool is_yes(const Consistency& c) { return std::holds_alternative<std::monostate>(c); }

/// Every step's can fact provable from gamma, and gamma plus all the
/// happens facts at once not refuted within budget.
Consistency is_consistent_plan(const Plan& p, const KnowledgeBase& gamma,
                               const prover::Budget& budget = {});

/// Proof of g from gamma plus the plan's happens facts, or the exhausted dimension.
prover::ProveResult satisfies(const Plan& p, const KnowledgeBase& gamma, const Formula& g,
                              const prover::Budget& budget = {});

enum class FailureKind { MissingCan, Inconsistent, GoalNotEntailed };
const char* to_string(FailureKind k);

struct CandidateFailure {
  Plan plan;
  FailureKind kind = FailureKind::GoalNotEntailed;
  std::size_t step = 0;                 // MissingCan
  prover::Proof refutation;             // Inconsistent
  prover::Exhausted exhausted = prover::Exhausted::None;  // GoalNotEntailed
};

struct NonexistenceCertificate {
  Formula goal;
  Term planner;
  std::vector<Term> pool;
  CatalogMode mode = CatalogMode::Gamma;
  Term now;
  long horizon = 0;
  std::vector<Formula> catalog;
  prover::Budget budget;
  long candidate_count = 0;
  std::vector<CandidateFailure> failures;

  std::string catalog_hash() const;
};

struct Found {
  Plan plan;
  prover::Proof proof;
};

using SearchResult = std::variant<Found, NonexistenceCertificate>;

/// Π over window moments of (1 + steps available at that moment).
long candidate_count(const std::vector<Formula>& catalog, const std::vector<Term>& pool,
                     long now, long horizon);

/// Every candidate in canonical order: by length, then lexicographic over
/// (agent, action, time) step tuples, agents in pool order and actions in
/// catalog order. Throws HorizonTooLarge past `ceiling`.
std::vector<Plan> enumerate(const std::vector<Formula>& catalog, const std::vector<Term>& pool,
                            const Term& now, long horizon, long ceiling);

/// The planning view: gamma plus the catalog atoms.
KnowledgeBase planning_view(const PlanningProblem& problem);

SearchResult search(const PlanningProblem& problem);

/// plan-then(... plan-then(plan-empty(t), a1, x1, t1) ..., an, xn, tn).
Term reify(const Signature& sig, const Plan& p);
Plan interpret(const Term& t);
Term agent_list(const Signature& sig, const std::vector<Term>& agents);

/// plan(ρ, agents) ∧ (executed(ρ) → g)
Formula plan_claim(const Signature& sig, const Plan& p, const Formula& g);
/// S(τ, t, plan(ρ, agents) ∧ (executed(ρ) → g))
Formula says_plan(const Signature& sig, const Term& speaker, const Term& t, const Plan& p,
                  const Formula& g);
/// S(τ, t, ¬∃ρ:Plan (plan(ρ, pool) ∧ within(ρ, now+H) ∧ (executed(ρ) → g)))
Formula says_no_plan(const Signature& sig, const Term& speaker, const Term& t,
                     const std::vector<Term>& pool, long last_moment, const Formula& g);

/// Line-delimited JSON: header, then one record per failed candidate.
std::string serialize_certificate(const NonexistenceCertificate& c);
NonexistenceCertificate parse_certificate(const std::string& text, const Signature& sig);

struct CertificateCheck {
  bool accepted = false;
  std::string reason;
  explicit operator bool() const { return accepted; }
};

/// Recomputes the enumeration from the catalog, checks the count and order,
/// checks every refutation proof, confirms each missing can is not among the
/// catalog or gamma, and (when rerun) re-runs the bounded goal prover on each
/// goal-not-entailed candidate.
CertificateCheck verify_certificate(const NonexistenceCertificate& c, const KnowledgeBase& gamma,
                                    bool rerun = true);

}  // namespace tai::planner
