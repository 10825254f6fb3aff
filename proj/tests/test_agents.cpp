#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tai/agents.hpp"
#include "tai/document.hpp"
#include "tai/parser.hpp"
#include "tai/prover/checker.hpp"
#include "tai/prover/proof_io.hpp"

using namespace tai;
using namespace tai::agents;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(TAI_SCENARIO_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string edit(std::string text, const std::string& from, const std::string& to) {
  auto at = text.find(from);
  REQUIRE_MESSAGE(at != std::string::npos, from);
  return text.replace(at, from.size(), to);
}

const char* kStormBeliefs =
    "(store a_h (B a_h 0 (forall (t Moment) (can a_h (req a_c (shopping j)) t))))\n"
    "(store a_h (B a_h 0 (forall (t Moment) (can a_c (check weather) t))))\n"
    "(store a_h (B a_h 0 (forall (t Moment) (can a_c (recc (shopping j)) t))))\n";
const char* kShopBelief = "(store a_h (B a_h 0 (forall (t Moment) (can j (shopping j) t))))\n";

std::string storm_level2(bool knows_shop) {
  std::string s = edit(slurp("storm.tai"), "(agent a_h level1)", "(agent a_h level2)");
  return s + kStormBeliefs + (knows_shop ? kShopBelief : "");
}

std::string field(const Event& e, const std::string& key) {
  for (const auto& [k, v] : e.fields)
    if (k == key) return v;
  return {};
}

std::vector<const Event*> all(const Transcript& t, const std::string& kind) {
  std::vector<const Event*> out;
  for (const Event& e : t.events)
    if (e.kind == kind) out.push_back(&e);
  return out;
}

// Reloads every artifact from its text form and checks it against its premises.
void verify_artifacts(const Transcript& t) {
  for (const Artifact& a : t.artifacts) {
    INFO(a.name);
    KnowledgeBase kb = load_kb(a.kb_text);
    if (a.kind == Artifact::Kind::Proof) {
      auto p = prover::parse_proof(a.content, kb.signature());
      CHECK(prover::check(p, kb).accepted);
    } else {
      auto c = planner::parse_certificate(a.content, kb.signature());
      CHECK(planner::verify_certificate(c, kb).accepted);
    }
  }
}

World monoxide_at_tick1(const std::string& text) {
  World w = make_world(load_scenario(text));
  w.clock = 1;
  const Signature& sig = w.gamma.signature();
  w.agents[0].store.add(parse_formula("(B tau 1 co-elevated)", sig));
  return w;
}

}  // namespace

TEST_CASE("scenario files load and report positioned errors") {
  for (const char* name : {"storm.tai", "monoxide.tai"}) {
    CHECK(check_scenario(slurp(name)).empty());
    CHECK_NOTHROW(load_scenario(slurp(name)));
  }
  Scenario s = load_scenario(slurp("storm.tai"));
  CHECK(s.agents.size() == 4);
  CHECK(s.config.horizon == 3);
  CHECK(s.config.ticks == 8);
  CHECK(s.agents[1].contract.size() == 2);
  CHECK(s.schedule.front().tick == 2);

  auto errs = check_scenario(
      "(agent a level3)\n"
      "(pred p ())\n"
      "(formula f (and p q))\n"
      "(percept 1 nobody p)\n"
      "(horizon 0)\n");
  REQUIRE(errs.size() == 4);
  CHECK(errs[0].find("1:") != std::string::npos);
  CHECK(errs[1].find("3:") != std::string::npos);
  CHECK_THROWS_AS(load_scenario("(pred p ())\n(formula f (and p q))"), UnknownSymbol);
  CHECK_THROWS_AS(load_scenario("(formula f (and"), SyntaxError);
  CHECK(run(load_scenario("")).events.empty());
}

TEST_CASE("goal generation") {
  World w = monoxide_at_tick1(slurp("monoxide.tai"));
  auto g = generate_goal(w.agents[0], w);
  REQUIRE(g);
  CHECK(pretty(g->goal) == "family-awake");
  CHECK(g->time == 1);
  CHECK(prover::check(g->justification_proof, w.agents[0].store, g->justification).accepted);
  // the TV has no contract
  CHECK_FALSE(generate_goal(w.agents[1], w));

  // nothing fires before the percept
  World quiet = make_world(load_scenario(slurp("monoxide.tai")));
  quiet.clock = 1;
  CHECK_FALSE(generate_goal(quiet.agents[0], quiet));

  // an already entailed prescription is not a goal
  World done = monoxide_at_tick1(edit(slurp("monoxide.tai"), "(percept", "(formula awake family-awake)\n(percept"));
  CHECK_FALSE(generate_goal(done.agents[0], done));
}

TEST_CASE("storm end to end") {
  Transcript t = run(load_scenario(slurp("storm.tai")));
  const Event* first = t.find("declare-plan", "a_c");
  REQUIRE(first);
  CHECK(field(*first, "plan") == "[(a_c (check weather) 3)]");
  REQUIRE(t.find("say", "a_c"));
  CHECK(field(*t.find("say", "a_c"), "says") == "(S a_c a_h 5 storm)");
  CHECK(field(*t.find("goal", "a_h"), "goal") == "(forall (s Supply) (positive s))");
  REQUIRE(t.find("declare-no-solo-plan", "a_h"));
  const Event* joint = t.find("declare-plan", "a_h");
  REQUIRE(joint);
  CHECK(field(*joint, "agents") == "a_h a_c j");
  CHECK(field(*joint, "plan") ==
        "[(a_h (req a_c (shopping j)) 6), (a_c (recc (shopping j)) 7), (j (shopping j) 8)]");
  CHECK(all(t, "execute").size() == 4);
  CHECK(all(t, "divergence").empty());
  verify_artifacts(t);
}

TEST_CASE("monoxide end to end") {
  Transcript t = run(load_scenario(slurp("monoxide.tai")));
  REQUIRE(t.find("suspend", "tau"));
  REQUIRE(t.find("declare-no-solo-plan", "tau"));
  const Event* p = t.find("declare-plan", "tau");
  REQUIRE(p);
  CHECK(field(*p, "plan").find("(tv max-volume") != std::string::npos);
  REQUIRE(t.find("execute", "tv"));
  verify_artifacts(t);
}

TEST_CASE("goal already entailed yields the empty plan") {
  World w = monoxide_at_tick1(edit(slurp("monoxide.tai"), "(percept", "(formula notified firehouse-notified)\n(percept"));
  GoalRecord g;
  g.agent = w.agents[0].id;
  g.time = 1;
  g.goal = parse_formula("firehouse-notified", w.gamma.signature());
  run_level1(0, g, w);
  const Event* p = w.transcript.find("declare-plan", "tau");
  REQUIRE(p);
  CHECK(field(*p, "plan") == "[]");
  CHECK_FALSE(w.transcript.find("declare-no-solo-plan"));
}

TEST_CASE("no capable helper fails the episode with a full certificate") {
  std::string text = edit(slurp("monoxide.tai"), "(formula can-blast (forall (t Moment) (can tv max-volume t)))", "");
  World w = monoxide_at_tick1(text);
  auto g = generate_goal(w.agents[0], w);
  REQUIRE(g);
  try {
    run_level1(0, *g, w);
    FAIL("expected EpisodeFailed");
  } catch (const EpisodeFailed& e) {
    CHECK(e.certificate.pool.size() == 2);
    KnowledgeBase premises = load_kb(w.transcript.artifacts.back().kb_text);
    CHECK(planner::verify_certificate(e.certificate, premises).accepted);
    // the world alone does not give tau's capability knowledge
    CHECK_FALSE(planner::verify_certificate(e.certificate, w.gamma).accepted);
  }
  CHECK_THROWS_AS(run_level2(0, *g, w), Error);

  Transcript t = run(load_scenario(text));
  REQUIRE(t.find("episode-failed", "tau"));
  CHECK_FALSE(t.find("declare-plan"));
  verify_artifacts(t);
}

TEST_CASE("level2 with complete beliefs matches level1") {
  Transcript l1 = run(load_scenario(slurp("storm.tai")));
  Transcript l2 = run(load_scenario(storm_level2(true)));
  CHECK(l1.human() == l2.human());
}

TEST_CASE("level2 learns a missing capability and retries") {
  std::string text = edit(storm_level2(false), "(ticks 8)", "(ticks 9)");
  text += "(observe 6 a_h (forall (t Moment) (can j (shopping j) t)))\n";
  Transcript t = run(load_scenario(text));
  REQUIRE(t.find("episode-failed", "a_h"));
  REQUIRE(t.find("observe", "a_h"));
  REQUIRE(t.find("retry", "a_h"));
  const Event* p = t.find("declare-plan", "a_h");
  REQUIRE(p);
  CHECK(p->tick == 6);
  CHECK(field(*p, "agents") == "a_h a_c j");
  CHECK(t.find("execute", "j"));
  verify_artifacts(t);

  // without the observation the failure stands
  Transcript stuck = run(load_scenario(storm_level2(false)));
  CHECK(stuck.find("episode-failed", "a_h"));
  CHECK_FALSE(stuck.find("declare-plan", "a_h"));
}

TEST_CASE("a false capability belief shows up as a divergence") {
  std::string text = edit(storm_level2(true), "(formula can-shop (forall (t Moment) (can j (shopping j) t)))", "");
  Transcript t = run(load_scenario(text));
  REQUIRE(t.find("declare-plan", "a_h"));
  const Event* d = t.find("divergence", "j");
  REQUIRE(d);
  CHECK(d->tick == 8);
  CHECK_FALSE(t.find("execute", "j"));
}

TEST_CASE("observe accepts only capability or contract evidence") {
  Scenario s = load_scenario(slurp("storm.tai"));
  const Signature& sig = s.gamma.signature();
  AgentSpec a = s.agents[0];
  auto grown = observe(a, parse_formula("(forall (t Moment) (can j (shopping j) t))", sig), 6);
  CHECK(grown.store.formulas().size() == a.store.formulas().size() + 1);
  CHECK(grown.store.formulas().back() ==
        parse_formula("(B a_h 6 (forall (t Moment) (can j (shopping j) t)))", sig));
  CHECK_NOTHROW(observe(a, parse_formula("(forall (t Moment) (O a_c t storm (S a_c a_h (next t) storm)))", sig), 6));
  CHECK_THROWS_AS(observe(a, parse_formula("storm", sig), 6), SortError);
  CHECK_THROWS_AS(observe(a, parse_formula("(O a_h 1 storm storm)", sig), 6), SortError);

  Transcript t = run(load_scenario(slurp("storm.tai") + "(observe 3 a_h storm)\n"));
  CHECK(t.find("observe-rejected", "a_h"));
}

TEST_CASE("obligation resolution") {
  Scenario s = load_scenario(slurp("monoxide.tai"));
  const Signature& sig = s.gamma.signature();
  auto F = [&](const char* x) { return parse_formula(x, sig); };
  prover::Budget b;
  std::vector<Formula> plain{F("(O tau 1 co-elevated firehouse-notified)")};
  CHECK(resolve_obligations(s.agents[0], plain, s.gamma, b) == plain);

  std::vector<Formula> clash{F("(O-moral tau 1 co-elevated family-awake)"),
                             F("(O-moral tau 1 co-elevated (not family-awake))")};
  CHECK_THROWS_AS(resolve_obligations(s.agents[0], clash, s.gamma, b), UnresolvedConflict);

  std::vector<Formula> mixed{
      F("(O-moral tau 1 co-elevated family-awake)"),
      F("(O-legal tau 1 quiet-hours (forall (u Moment) (not (happens (action tv max-volume) u))))")};
  std::vector<Suspension> log;
  auto kept = resolve_obligations(s.agents[0], mixed, s.gamma, b, &log);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == mixed[0]);
  REQUIRE(log.size() == 1);
  CHECK(prover::check(log[0].refutation, sig, log[0].premises).accepted);
}

TEST_CASE("runs are deterministic") {
  for (const char* name : {"storm.tai", "monoxide.tai"}) {
    Transcript a = run(load_scenario(slurp(name)));
    Transcript b = run(load_scenario(slurp(name)));
    CHECK(a.human() == b.human());
    CHECK(a.structured() == b.structured());
    REQUIRE(a.artifacts.size() == b.artifacts.size());
    for (std::size_t i = 0; i < a.artifacts.size(); ++i) {
      CHECK(a.artifacts[i].content == b.artifacts[i].content);
      CHECK(a.artifacts[i].kb_text == b.artifacts[i].kb_text);
    }
  }
}
