// tai: command-line front end. Exit codes: 0 success, 1 verification or
// planning failure, 2 input error.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tai/agents.hpp"
#include "tai/document.hpp"
#include "tai/parser.hpp"
#include "tai/planner.hpp"
#include "tai/prover/checker.hpp"
#include "tai/prover/proof_io.hpp"
#include "tai/prover/prover.hpp"

namespace fs = std::filesystem;
using namespace tai;

namespace {

constexpr int kOk = 0, kFail = 1, kInput = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<int> depth, size;
  std::optional<long> horizon;
  long seed = 0;
  std::string format = "human";
  bool structured() const { return format == "structured"; }
};

bool color() {
  const char* c = std::getenv("TAI_COLOR");
  return c && std::string(c) == "1";
}

std::string paint(const std::string& s, const char* code) {
  return color() ? std::string("\033[") + code + "m" + s + "\033[0m" : s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

agents::Scenario load(const std::string& path, const Options& o) {
  agents::Scenario s = agents::load_scenario(read_file(path));
  if (o.depth) s.config.budget.max_depth = *o.depth;
  if (o.size) s.config.budget.max_formula_size = *o.size;
  if (o.horizon) s.config.horizon = *o.horizon;
  return s;
}

std::string proof_listing(const prover::Proof& p) {
  auto nodes = prover::post_order(p);
  std::map<const prover::ProofNode*, std::size_t> id;
  std::ostringstream out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    id[nodes[i]] = i;
    out << "  " << i << "  " << prover::rule_name(nodes[i]->rule) << "  " << pretty(nodes[i]->conclusion);
    if (!nodes[i]->premises.empty()) {
      out << "  from";
      for (const auto& q : nodes[i]->premises) out << ' ' << id[q.get()];
    }
    out << '\n';
  }
  return out.str();
}

int cmd_check(const std::string& file) {
  auto errors = agents::check_scenario(read_file(file));
  for (const auto& e : errors) std::cerr << file << ":" << e << '\n';
  if (errors.empty()) std::cout << paint("ok", "32") << '\n';
  return errors.empty() ? kOk : kFail;
}

int cmd_prove(const std::string& file, const std::string& goal_text, const std::string& emit, const Options& o) {
  agents::Scenario s = load(file, o);
  Formula goal = parse_formula(goal_text, s.gamma.signature());
  auto r = prover::prove(s.gamma, goal, s.config.budget);
  if (!r.ok()) {
    if (o.structured())
      std::cout << nlohmann::json{{"result", "unproved"}, {"exhausted", prover::to_string(r.exhausted)}}.dump()
                << '\n';
    else
      std::cout << paint("no proof", "31") << " within budget (" << prover::to_string(r.exhausted) << ")\n";
    return kFail;
  }
  std::string text = prover::serialize_proof(r.proof);
  if (!emit.empty()) write_file(emit, text);
  if (o.structured())
    std::cout << text;
  else
    std::cout << paint("proved", "32") << ' ' << pretty(goal) << '\n' << proof_listing(r.proof);
  return kOk;
}

int cmd_plan(const std::string& file, const std::string& goal_text, const std::string& cert_path,
             const std::string& emit, const std::string& planner_name, const Options& o) {
  agents::Scenario s = load(file, o);
  const Signature& sig = s.gamma.signature();
  planner::PlanningProblem p;
  p.gamma = s.gamma;
  p.goal = parse_formula(goal_text, sig);
  for (const auto& a : s.agents) p.pool.push_back(a.id);
  if (p.pool.empty()) throw InputError("the file declares no agents");
  p.planner = p.pool.front();
  if (!planner_name.empty()) {
    auto it = std::find_if(p.pool.begin(), p.pool.end(), [&](const Term& t) { return t.name() == planner_name; });
    if (it == p.pool.end()) throw InputError("unknown planner agent " + planner_name);
    p.planner = *it;
  }
  p.now = Term::integer(s.config.start);
  p.horizon = s.config.horizon;
  p.mode = planner::CatalogMode::Gamma;
  p.catalog = planner::build_catalog(s.gamma, p.mode, p.planner, p.pool, s.config.start, p.horizon);
  p.budget = s.config.budget;
  p.ceiling = s.config.ceiling;

  auto result = planner::search(p);
  if (auto* f = std::get_if<planner::Found>(&result)) {
    if (!emit.empty()) write_file(emit, prover::serialize_proof(f->proof));
    if (o.structured()) {
      nlohmann::json steps = nlohmann::json::array();
      for (const auto& st : f->plan.steps)
        steps.push_back(nlohmann::json::array(
            {nlohmann::json(std::string(st.agent.name())), nlohmann::json(pretty(st.action)), nlohmann::json(*st.time.integer_value())}));
      std::cout << nlohmann::json{{"result", "plan"}, {"plan", steps}}.dump() << '\n';
    } else {
      std::cout << paint("plan", "32") << ' ' << f->plan.str() << '\n' << proof_listing(f->proof);
    }
    return kOk;
  }
  const auto& cert = std::get<planner::NonexistenceCertificate>(result);
  if (!cert_path.empty()) write_file(cert_path, planner::serialize_certificate(cert));
  if (o.structured())
    std::cout << nlohmann::json{{"result", "no-plan"}, {"candidates", cert.candidate_count}}.dump() << '\n';
  else
    std::cout << paint("no plan", "31") << " among " << cert.candidate_count << " candidates within horizon "
              << p.horizon << '\n';
  return kFail;
}

int cmd_run(const std::string& file, const std::string& out_dir, const Options& o) {
  agents::Scenario s = load(file, o);
  // The runtime is deterministic; the seed is only recorded.
  agents::Transcript t = agents::run(s);
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir / "artifacts", ec);
  if (ec) throw InputError("cannot create " + (dir / "artifacts").string());
  write_file(dir / "transcript.txt", t.human());
  write_file(dir / "transcript.jsonl", t.structured());
  for (const auto& a : t.artifacts) {
    write_file(dir / "artifacts" / (a.name + a.extension()), a.content);
    write_file(dir / "artifacts" / (a.name + ".kb"), a.kb_text);
  }
  if (o.structured()) {
    std::cout << t.structured();
  } else {
    std::istringstream lines(t.human());
    for (std::string line; std::getline(lines, line);)
      std::cout << (line.rfind("t=", 0) == 0 ? paint(line, "1") : line) << '\n';
  }
  return kOk;
}

int cmd_verify(const std::string& artifact, const std::string& kb_file, const Options& o) {
  std::string text = read_file(artifact);
  std::string kb_text = read_file(kb_file);
  KnowledgeBase kb;
  try {
    kb = load_kb(kb_text);
  } catch (const Error&) {
    kb = agents::load_scenario(kb_text).gamma;  // a scenario file works as premises too
  }
  bool accepted = false;
  std::string reason;
  try {
    if (text.find("nonexistence-certificate") != std::string::npos) {
      auto c = planner::parse_certificate(text, kb.signature());
      auto r = planner::verify_certificate(c, kb);
      accepted = r.accepted;
      reason = r.reason;
    } else {
      auto p = prover::parse_proof(text, kb.signature());
      auto r = prover::check(p, kb);
      accepted = r.accepted;
      reason = r.reason;
    }
  } catch (const std::exception& e) {
    // an artifact that no longer reads is a rejected artifact
    reason = e.what();
  }
  if (o.structured())
    std::cout << nlohmann::json{{"accepted", accepted}, {"reason", reason}}.dump() << '\n';
  else
    std::cout << (accepted ? paint("accepted", "32") : paint("rejected", "31") + ": " + reason) << '\n';
  return accepted ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tai: prover, planner and agent runtime"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c) {
    c->add_option("--budget-depth", o.depth, "prover depth bound")->check(CLI::PositiveNumber);
    c->add_option("--budget-size", o.size, "prover formula size bound")->check(CLI::PositiveNumber);
    c->add_option("--format", o.format, "human or structured")->check(CLI::IsMember({"human", "structured"}));
  };

  std::string file, goal, emit, cert, out_dir, artifact, kb, planner_name;

  auto* check = app.add_subcommand("check", "parse and sort-check a file");
  check->add_option("file", file)->required();
  common(check);

  auto* prove = app.add_subcommand("prove", "prove a goal from a file");
  prove->add_option("file", file)->required();
  prove->add_option("goal", goal)->required();
  prove->add_option("--emit-proof", emit, "write the proof here");
  common(prove);

  auto* plan = app.add_subcommand("plan", "search for a plan");
  plan->add_option("file", file)->required();
  plan->add_option("goal", goal)->required();
  plan->add_option("--horizon", o.horizon)->check(CLI::PositiveNumber);
  plan->add_option("--planner", planner_name, "planning agent (default: first declared)");
  plan->add_option("--emit-proof", emit, "write the satisfaction proof here");
  plan->add_option("--certify-nonexistence", cert, "write the certificate here when no plan exists");
  common(plan);

  auto* run = app.add_subcommand("run", "run a scenario");
  run->add_option("scenario", file)->required();
  run->add_option("--seed", o.seed, "recorded; runs are deterministic")->check(CLI::NonNegativeNumber);
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--horizon", o.horizon)->check(CLI::PositiveNumber);
  common(run);

  auto* verify = app.add_subcommand("verify", "check a proof or certificate file");
  verify->add_option("artifact", artifact)->required();
  verify->add_option("kb", kb)->required();
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*check) return cmd_check(file);
    if (*prove) return cmd_prove(file, goal, emit, o);
    if (*plan) return cmd_plan(file, goal, cert, emit, planner_name, o);
    if (*run) return cmd_run(file, out_dir, o);
    if (*verify) return cmd_verify(artifact, kb, o);
  } catch (const planner::HorizonTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}
