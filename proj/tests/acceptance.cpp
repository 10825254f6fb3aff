// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "ec_fixtures.hpp"
#include "planner_fixtures.hpp"
#include "prover_fixtures.hpp"
#include "tai/agents.hpp"
#include "tai/document.hpp"
#include "tai/prover/proof_io.hpp"

using namespace tai;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(TAI_SCENARIO_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string field(const agents::Event& e, const std::string& key) {
  for (const auto& [k, v] : e.fields)
    if (k == key) return v;
  return {};
}

const agents::Artifact* artifact(const agents::Transcript& t, const agents::Event& e) {
  for (const auto& name : e.artifacts)
    for (const auto& a : t.artifacts)
      if (a.name + a.extension() == name) return &a;
  return nullptr;
}

// Reloads a proof artifact from text and checks it, optionally against an expected root.
bool proof_checks(const agents::Artifact& a, const std::optional<std::string>& expected = std::nullopt) {
  KnowledgeBase kb = load_kb(a.kb_text);
  auto p = prover::parse_proof(a.content, kb.signature());
  std::optional<Formula> goal;
  if (expected) goal = parse_formula(*expected, kb.signature());
  return prover::check(p, kb, goal).accepted;
}

bool certificate_checks(const agents::Artifact& a) {
  KnowledgeBase kb = load_kb(a.kb_text);
  return planner::verify_certificate(planner::parse_certificate(a.content, kb.signature()), kb).accepted;
}

Outcome schemata() {
  using namespace fixtures;
  auto t0 = std::chrono::steady_clock::now();
  Signature sig = schema_sig();
  int ok = 0, n = 0;
  for (const Golden& g : golden_suite()) {
    static const std::set<std::string> schema_names{"IK", "IB", "I4", "I13", "I14"};
    if (!schema_names.count(g.name)) continue;
    ++n;
    KnowledgeBase kb = kb_of(sig, g.gamma);
    Formula goal = parse_formula(g.goal, kb.signature());
    auto r = prove(kb, goal);
    if (!r.ok() || !check(r.proof, kb, goal).accepted) continue;
    auto rules = rules_used(r.proof);
    if (std::find(rules.begin(), rules.end(), g.signature_rule) != rules.end()) ++ok;
  }
  double s = seconds_since(t0);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/%d proofs checked in %.3f s", ok, n, s);
  return {ok == n && n == 5 && s < 1.0, buf};
}

Outcome storm() {
  auto t0 = std::chrono::steady_clock::now();
  agents::Scenario s = agents::load_scenario(slurp("storm.tai"));
  agents::Transcript t = agents::run(s);
  double secs = seconds_since(t0);
  const agents::Event* p = t.find("declare-plan", "a_h");
  if (!p) return {false, "no plan declared by a_h"};
  std::istringstream names(field(*p, "agents"));
  std::set<std::string> got{std::istream_iterator<std::string>(names), {}};
  bool agents_ok = got == std::set<std::string>{"a_h", "a_c", "j"};
  const agents::Artifact* a = artifact(t, *p);
  bool proof_ok = a && proof_checks(*a, "(forall (s Supply) (positive s))");
  char buf[160];
  std::snprintf(buf, sizeof buf, "agents {%s}, satisfaction proof %s, horizon %ld, %.2f s",
                field(*p, "agents").c_str(), proof_ok ? "verifies" : "REJECTED", s.config.horizon, secs);
  return {agents_ok && proof_ok && s.config.horizon <= 6 && secs < 30, buf};
}

Outcome monoxide() {
  auto t0 = std::chrono::steady_clock::now();
  agents::Transcript t = agents::run(agents::load_scenario(slurp("monoxide.tai")));
  double secs = seconds_since(t0);
  const agents::Event* solo = t.find("declare-no-solo-plan", "tau");
  const agents::Event* susp = t.find("suspend", "tau");
  const agents::Event* plan = t.find("declare-plan", "tau");
  bool a = solo && artifact(t, *solo) && certificate_checks(*artifact(t, *solo));
  bool b = susp && artifact(t, *susp) && proof_checks(*artifact(t, *susp), "false");
  bool c = plan && field(*plan, "plan").find("(tv max-volume") != std::string::npos;
  char buf[160];
  std::snprintf(buf, sizeof buf, "solo certificate %s, suspension refutation %s, tv in plan %s, %.2f s",
                a ? "verifies" : "missing", b ? "verifies" : "missing", c ? "yes" : "no", secs);
  return {a && b && c && secs < 30, buf};
}

Outcome planner_oracle() {
  using namespace planfix;
  auto t0 = std::chrono::steady_clock::now();
  long agree = 0, total = 0;
  for_each_case([&](const SweepCase& c) {
    ++total;
    bool found = std::holds_alternative<planner::Found>(planner::search(problem_of(c)));
    if (found == oracle_exists(c.gamma, c.pool, c.actions, c.horizon, c.goal, sweep_budget())) ++agree;
  });
  double s = seconds_since(t0);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%ld/%ld problems agree in %.1f s", agree, total, s);
  return {agree == total && total > 0 && s < 300, buf};
}

Outcome event_calculus() {
  using namespace ecfix;
  auto t0 = std::chrono::steady_clock::now();
  Signature sig = sweep_sig();
  ecfix::Outcome out;
  structured_family([&](const ec::Narrative& n, int fluents) { compare(sig, n, fluents, out, true); });
  std::mt19937 rng(11);
  for (int i = 0; i < 400 && seconds_since(t0) < 240; ++i) {
    int fluents = 0;
    ec::Narrative n = random_narrative(rng, fluents);
    compare(sig, n, fluents, out, true);
  }
  double s = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%ld/%ld holds queries agree (%ld positive) in %.1f s", out.agree, out.queries,
                out.positive, s);
  return {out.agree == out.queries && out.positive > 0 && s < 300, buf};
}

Outcome checker_robustness() {
  using namespace fixtures;
  Signature sig = schema_sig();
  long total = 0, accepted = 0;
  for (const Golden& g : golden_suite()) {
    KnowledgeBase kb = kb_of(sig, g.gamma);
    Formula goal = parse_formula(g.goal, kb.signature());
    Proof p = prove(kb, goal).proof;
    if (!p) return {false, "golden proof missing: " + g.name};
    for (const Proof& m : mutations(p)) {
      ++total;
      if (check(m, kb, goal).accepted) ++accepted;
    }
  }
  return {total >= 1000 && accepted == 0,
          std::to_string(total) + " mutations, " + std::to_string(accepted) + " accepted"};
}

Outcome determinism() {
  for (const char* name : {"storm.tai", "monoxide.tai"}) {
    auto a = agents::run(agents::load_scenario(slurp(name)));
    auto b = agents::run(agents::load_scenario(slurp(name)));
    if (a.human() != b.human() || a.structured() != b.structured())
      return {false, std::string(name) + " transcripts differ"};
    for (std::size_t i = 0; i < a.artifacts.size(); ++i)
      if (a.artifacts[i].content != b.artifacts[i].content) return {false, std::string(name) + " artifacts differ"};
  }
  return {true, "storm and monoxide transcripts and artifacts byte-identical"};
}

Outcome goal_tiers() {
  using namespace planfix;
  KnowledgeBase kb = tier_world();
  const Signature& sig = kb.signature();
  Term robot = Term::constant("robot", sorts::Agent);
  int ok = 0;
  for (const Tier& tier : tiers()) {
    planner::PlanningProblem p;
    p.gamma = kb;
    p.planner = robot;
    p.goal = parse_formula(tier.goal, sig);
    p.now = Term::integer(0);
    p.horizon = 2;
    p.pool = {robot};
    p.catalog = planner::build_catalog(kb, planner::CatalogMode::Gamma, robot, p.pool, 0, 2);
    auto r = planner::search(p);
    auto* f = std::get_if<planner::Found>(&r);
    if (f && prover::check(f->proof, kb.with(f->plan.happens_facts(sig)), p.goal).accepted) ++ok;
  }
  return {ok == 3, std::to_string(ok) + "/3 tiers planned (propositional, quantified, nested belief)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"schemata golden suite", schemata},
      {"storm reproduction", storm},
      {"monoxide reproduction", monoxide},
      {"planner oracle equivalence", planner_oracle},
      {"event calculus oracle agreement", event_calculus},
      {"proof checker robustness", checker_robustness},
      {"determinism", determinism},
      {"goal complexity tiers", goal_tiers},
  };
  int failed = 0, k = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", ++k, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
