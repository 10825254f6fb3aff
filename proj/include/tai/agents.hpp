#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tai/errors.hpp"
#include "tai/knowledge_base.hpp"
#include "tai/planner.hpp"
#include "tai/prover/proof.hpp"
#include "tai/prover/prover.hpp"

namespace tai::agents {

enum class Mode { Level1, Level2 };
const char* to_string(Mode m);

struct AgentSpec {
  Term id;
  Mode mode = Mode::Level1;
  std::vector<Formula> contract;
  KnowledgeBase store;
};

struct Scheduled {
  enum class Kind { Percept, Message, Observe };
  long tick = 0;
  Kind kind = Kind::Percept;
  Term agent;  // perceiver/observer; speaker for messages
  Formula formula;
};

struct Config {
  long horizon = 3;
  long delta = 2;
  long ticks = 0;
  long start = 0;
  long ceiling = 100'000;
  prover::Budget budget;
};

struct Scenario {
  KnowledgeBase gamma;
  std::vector<AgentSpec> agents;
  std::vector<Scheduled> schedule;
  Config config;
};

/// Reads a scenario document. Throws SyntaxError/SortError/UnknownSymbol with
/// positions on the first bad form.
Scenario load_scenario(std::string_view text);

/// Every problem in the document, one message per bad top-level form.
std::vector<std::string> check_scenario(std::string_view text);

class EpisodeFailed : public Error {
 public:
  EpisodeFailed(const std::string& what, planner::NonexistenceCertificate c)
      : Error(what), certificate(std::move(c)) {}
  planner::NonexistenceCertificate certificate;
};

class UnresolvedConflict : public Error {
 public:
  using Error::Error;
};

/// A checkable file produced during a run, with the premises it checks against.
struct Artifact {
  enum class Kind { Proof, Certificate };
  std::string name;  // file stem
  Kind kind = Kind::Proof;
  std::string content;
  std::string kb_text;
  std::string extension() const { return kind == Kind::Proof ? ".proof" : ".cert"; }
};

struct Event {
  long tick = 0;
  std::string kind;
  std::string agent;
  std::vector<std::pair<std::string, std::string>> fields;
  std::vector<std::string> artifacts;  // file names
};

struct Transcript {
  std::vector<Event> events;
  std::vector<Artifact> artifacts;
  std::string human() const;
  std::string structured() const;
  const Event* find(const std::string& kind, const std::string& agent = {}) const;
};

struct GoalRecord {
  Term agent;
  long time = 0;
  Formula goal;
  Formula justification;
  prover::Proof justification_proof;
  long delta = 2;
  std::size_t clause = 0;
};

struct Suspension {
  Formula moral;
  Formula legal;
  prover::Proof refutation;
  std::vector<Formula> premises;  // what the refutation checks against
};

struct PlannedStep {
  planner::PlanStep step;
  std::size_t agent = 0;  // who declared the plan
};

struct World {
  KnowledgeBase gamma;
  long clock = 0;
  std::vector<AgentSpec> agents;
  std::vector<Formula> message_log;
  Config config;
  std::vector<Scheduled> schedule;
  Transcript transcript;

  // Runtime bookkeeping.
  std::vector<std::vector<bool>> fired;        // per agent, per contract clause
  std::vector<std::vector<Formula>> suspended;  // per agent, legal oughts set aside
  std::vector<PlannedStep> pending;
  std::vector<std::optional<GoalRecord>> retry;  // level-2 goals awaiting an observation
  std::vector<bool> observed;                    // observation arrived this tick

  std::size_t index_of(const Term& agent) const;
  std::vector<Term> agent_ids() const;
};

World make_world(const Scenario& s);

/// Instantiates clause times at the current clock and returns the first
/// triggered, unfired clause whose prescription is not yet entailed.
std::optional<GoalRecord> generate_goal(const AgentSpec& a, const World& w);

/// Level-1*/Level-2* episode: obligation resolution, solo search, joint
/// search, declarations. Throws EpisodeFailed with the full-pool certificate.
void run_level1(std::size_t tau, const GoalRecord& goal, World& w);
void run_level2(std::size_t tau, const GoalRecord& goal, World& w);

/// Appends B(tau, now, evidence). Evidence must be a can fact (possibly
/// quantified over time) or another agent's Ought; SortError otherwise.
AgentSpec observe(AgentSpec tau, const Formula& evidence, long now);

/// Moral oughts override legal ones whose prescriptions they refute jointly
/// with gamma. Two refuting moral oughts raise UnresolvedConflict.
std::vector<Formula> resolve_obligations(const AgentSpec& a, const std::vector<Formula>& oughts,
                                         const KnowledgeBase& gamma, const prover::Budget& budget,
                                         std::vector<Suspension>* log = nullptr);

void step_world(World& w);

/// make_world + config.ticks steps.
Transcript run(const Scenario& s);

}  // namespace tai::agents
