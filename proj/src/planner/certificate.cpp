#include <json.hpp>
#include <sstream>

#include "tai/hash.hpp"
#include "tai/parser.hpp"
#include "tai/planner.hpp"
#include "tai/prover/checker.hpp"
#include "tai/prover/proof_io.hpp"

namespace tai::planner {

using json = nlohmann::ordered_json;

namespace {

json plan_json(const Plan& p) {
  json steps = json::array();
  for (const auto& s : p.steps) steps.push_back({pretty(s.agent), pretty(s.action), pretty(s.time)});
  return steps;
}

prover::Exhausted exhausted_from(const std::string& s) {
  for (auto e : {prover::Exhausted::None, prover::Exhausted::Depth, prover::Exhausted::Size,
                 prover::Exhausted::Candidates, prover::Exhausted::Steps})
    if (s == prover::to_string(e)) return e;
  throw FormatError("certificate: unknown budget dimension " + s);
}

CatalogMode mode_from(const std::string& s) {
  for (auto m : {CatalogMode::Gamma, CatalogMode::Knows, CatalogMode::Believes})
    if (s == to_string(m)) return m;
  throw FormatError("certificate: unknown catalog mode " + s);
}

FailureKind kind_from(const std::string& s) {
  for (auto k : {FailureKind::MissingCan, FailureKind::Inconsistent, FailureKind::GoalNotEntailed})
    if (s == to_string(k)) return k;
  throw FormatError("certificate: unknown failure reason " + s);
}

CertificateCheck reject(std::string why) { return {false, std::move(why)}; }

}  // namespace

std::string NonexistenceCertificate::catalog_hash() const {
  std::string text;
  for (const Formula& f : catalog) text += pretty(f) + "\n";
  return hex64(fnv1a64(text));
}

std::string serialize_certificate(const NonexistenceCertificate& c) {
  std::ostringstream out;
  json h;
  h["kind"] = "nonexistence-certificate";
  h["goal"] = pretty(c.goal);
  h["planner"] = pretty(c.planner);
  json pool = json::array();
  for (const Term& a : c.pool) pool.push_back(pretty(a));
  h["agents"] = pool;
  h["mode"] = to_string(c.mode);
  h["planning_time"] = pretty(c.now);
  h["horizon"] = c.horizon;
  json cat = json::array();
  for (const Formula& f : c.catalog) cat.push_back(pretty(f));
  h["catalog"] = cat;
  h["catalog_hash"] = c.catalog_hash();
  h["candidate_count"] = c.candidate_count;
  h["budget"] = {{"depth", c.budget.max_depth},
                 {"size", c.budget.max_formula_size},
                 {"candidates", c.budget.max_candidates},
                 {"steps", c.budget.max_steps}};
  out << h.dump() << "\n";
  for (std::size_t i = 0; i < c.failures.size(); ++i) {
    const auto& f = c.failures[i];
    json r;
    r["index"] = i;
    r["plan"] = plan_json(f.plan);
    r["reason"] = to_string(f.kind);
    switch (f.kind) {
      case FailureKind::MissingCan: r["step"] = f.step; break;
      case FailureKind::Inconsistent: r["proof"] = prover::serialize_proof(f.refutation); break;
      case FailureKind::GoalNotEntailed: r["exhausted"] = prover::to_string(f.exhausted); break;
    }
    out << r.dump() << "\n";
  }
  return out.str();
}

NonexistenceCertificate parse_certificate(const std::string& text, const Signature& sig) {
  std::istringstream in(text);
  std::vector<json> records;
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw FormatError(std::string("certificate: ") + e.what());
    }
  }
  if (records.empty() || records[0].value("kind", "") != "nonexistence-certificate")
    throw FormatError("certificate: missing header");
  NonexistenceCertificate c;
  try {
    const json& h = records[0];
    c.goal = parse_formula(h.at("goal").get<std::string>(), sig);
    c.planner = parse_term(h.at("planner").get<std::string>(), sig);
    for (const auto& a : h.at("agents")) c.pool.push_back(parse_term(a.get<std::string>(), sig));
    c.mode = mode_from(h.at("mode").get<std::string>());
    c.now = parse_term(h.at("planning_time").get<std::string>(), sig);
    c.horizon = h.at("horizon").get<long>();
    for (const auto& f : h.at("catalog")) c.catalog.push_back(parse_formula(f.get<std::string>(), sig));
    if (c.catalog_hash() != h.at("catalog_hash").get<std::string>())
      throw FormatError("certificate: catalog hash mismatch");
    c.candidate_count = h.at("candidate_count").get<long>();
    const json& b = h.at("budget");
    c.budget.max_depth = b.at("depth").get<int>();
    c.budget.max_formula_size = b.at("size").get<int>();
    c.budget.max_candidates = b.at("candidates").get<int>();
    c.budget.max_steps = b.at("steps").get<long>();
    for (std::size_t i = 1; i < records.size(); ++i) {
      const json& r = records[i];
      if (r.at("index").get<std::size_t>() != i - 1) throw FormatError("certificate: records out of order");
      CandidateFailure f;
      f.plan.planning_time = c.now;
      for (const auto& s : r.at("plan"))
        f.plan.steps.push_back({parse_term(s.at(0).get<std::string>(), sig),
                                parse_term(s.at(1).get<std::string>(), sig),
                                parse_term(s.at(2).get<std::string>(), sig)});
      f.kind = kind_from(r.at("reason").get<std::string>());
      switch (f.kind) {
        case FailureKind::MissingCan: f.step = r.at("step").get<std::size_t>(); break;
        case FailureKind::Inconsistent:
          f.refutation = prover::parse_proof(r.at("proof").get<std::string>(), sig);
          break;
        case FailureKind::GoalNotEntailed:
          f.exhausted = exhausted_from(r.at("exhausted").get<std::string>());
          break;
      }
      c.failures.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("certificate: ") + e.what());
  }
  return c;
}

CertificateCheck verify_certificate(const NonexistenceCertificate& c, const KnowledgeBase& gamma,
                                    bool rerun) {
  const Signature& sig = gamma.signature();
  if (!c.goal.closed()) return reject("goal is not closed");
  if (!c.now.integer_value()) return reject("planning time is not an integer moment");
  long now = *c.now.integer_value();
  for (const Formula& f : c.catalog) {
    const Term& a = f.is(FormulaKind::Atom) ? f.atom_term() : Term();
    if (a.null() || !a.is_application() || a.name() != sym::can || !f.closed())
      return reject("catalog entry is not a ground can atom: " + pretty(f));
    if (std::find(c.pool.begin(), c.pool.end(), a.args()[0]) == c.pool.end())
      return reject("catalog entry outside the agent pool: " + pretty(f));
    auto t = a.args()[2].integer_value();
    if (!t || *t <= now || *t > now + c.horizon) return reject("catalog entry outside the window: " + pretty(f));
  }
  try {
    if (build_catalog(gamma, c.mode, c.planner, c.pool, now, c.horizon) != c.catalog)
      return reject("catalog differs from the capabilities the premises give the planner");
  } catch (const Error& e) {
    return reject(e.what());
  }
  long expected = candidate_count(c.catalog, c.pool, now, c.horizon);
  if (expected != c.candidate_count) return reject("candidate count does not match the catalog");
  if (static_cast<long>(c.failures.size()) != expected) return reject("enumeration is incomplete");
  std::vector<Plan> plans;
  try {
    plans = enumerate(c.catalog, c.pool, c.now, c.horizon, expected);
  } catch (const Error& e) {
    return reject(e.what());
  }

  PlanningProblem pr{gamma, c.planner, c.goal, c.now, c.horizon, c.pool, c.catalog, c.mode, c.budget};
  KnowledgeBase view = planning_view(pr);
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto& f = c.failures[i];
    std::string at = "candidate " + std::to_string(i) + " " + plans[i].str() + ": ";
    if (!(f.plan == plans[i])) return reject(at + "does not match the enumeration");
    switch (f.kind) {
      case FailureKind::Inconsistent: {
        if (!f.refutation) return reject(at + "missing refutation");
        auto facts = plans[i].happens_facts(sig);
        auto chk = prover::check(f.refutation, view.with(facts), Formula::falsum());
        if (!chk) return reject(at + "refutation rejected: " + chk.reason);
        break;
      }
      case FailureKind::MissingCan: {
        if (f.step >= plans[i].steps.size()) return reject(at + "step index out of range");
        const auto& s = plans[i].steps[f.step];
        if (rerun && prover::prove(view, can(sig, s.agent, s.action, s.time), c.budget).ok())
          return reject(at + "can fact is provable");
        break;
      }
      case FailureKind::GoalNotEntailed:
        if (rerun && satisfies(plans[i], view, c.goal, c.budget).ok() &&
            is_yes(is_consistent_plan(plans[i], view, c.budget)))
          return reject(at + "goal is provable within the recorded budget");
        break;
    }
  }
  return {true, {}};
}

}  // namespace tai::planner
