#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out, err;
};

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("tai-cli-" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

Result tai(const std::string& args) {
  fs::path out = scratch() / "stdout", err = scratch() / "stderr";
  std::string cmd = std::string("TAI_COLOR=0 ") + TAI_BINARY + " " + args + " >" + q(out) + " 2>" + q(err);
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

fs::path scenario(const char* name) { return fs::path(TAI_SCENARIO_DIR) / name; }

const char* kModalKb =
    "(const a Agent)\n(pred p ())\n(pred q ())\n"
    "(K a 1 p)\n(K a 2 (implies p q))\n";

// Random well-sorted documents over a fixed signature.
std::string random_document(std::mt19937& rng) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  std::function<std::string(int)> formula = [&](int depth) -> std::string {
    int k = depth <= 0 ? pick(3) : pick(10);
    std::string t = std::to_string(pick(6));
    const char* agent = pick(2) ? "a" : "b";
    const char* fl = pick(2) ? "f" : "g";
    switch (k) {
      case 0: return pick(2) ? "p" : "r";
      case 1: return std::string("(holds ") + fl + " " + t + ")";
      case 2: return std::string("(happens (action ") + agent + " x) " + t + ")";
      case 3: return "(not " + formula(depth - 1) + ")";
      case 4: return "(and " + formula(depth - 1) + " " + formula(depth - 1) + ")";
      case 5: return "(implies " + formula(depth - 1) + " " + formula(depth - 1) + ")";
      case 6: return "(forall (u Moment) (holds " + std::string(fl) + " u))";
      case 7: return std::string("(K ") + agent + " " + t + " " + formula(depth - 1) + ")";
      case 8: return std::string("(B ") + agent + " " + t + " " + formula(depth - 1) + ")";
      default: return std::string("(O ") + agent + " " + t + " " + formula(depth - 1) + " (happens (action " +
                      agent + " x) (next " + t + ")))";
    }
  };
  std::string doc = "(agent a level1)\n(agent b level2)\n(const x ActionType)\n(const f Fluent)\n"
                    "(const g Fluent)\n(pred p ())\n(pred r ())\n";
  int n = 1 + pick(5);
  for (int i = 0; i < n; ++i) doc += formula(3) + "\n";
  return doc;
}

}  // namespace

TEST_CASE("check") {
  CHECK(tai("check " + q(scenario("storm.tai"))).code == 0);
  CHECK(tai("check " + q(scenario("monoxide.tai"))).code == 0);

  spit(scratch() / "swapped.tai", "(const f Fluent)\n(holds 1 f)\n");
  Result r = tai("check " + q(scratch() / "swapped.tai"));
  CHECK(r.code == 1);
  CHECK(r.err.find("2:") != std::string::npos);
  CHECK(r.err.find("sort") != std::string::npos);

  CHECK(tai("check " + q(scratch() / "missing.tai")).code == 2);
  CHECK(tai("check").code == 2);
  CHECK(tai("frobnicate x").code == 2);
}

TEST_CASE("check accepts generated documents") {
  std::mt19937 rng(7);
  int rejected = 0;
  for (int i = 0; i < 1000; ++i) {
    fs::path f = scratch() / "gen.tai";
    std::string doc = random_document(rng);
    spit(f, doc);
    Result r = tai("check " + q(f));
    if (r.code != 0) {
      ++rejected;
      MESSAGE(doc << r.err);
    }
  }
  CHECK(rejected == 0);
}

TEST_CASE("prove and verify") {
  fs::path kb = scratch() / "modal.tai";
  spit(kb, kModalKb);
  fs::path proof = scratch() / "q.proof";
  Result r = tai("prove " + q(kb) + " '(K a 3 q)' --emit-proof " + q(proof));
  CHECK(r.code == 0);
  CHECK(r.out.find("proved") != std::string::npos);
  CHECK(tai("verify " + q(proof) + " " + q(kb)).code == 0);

  CHECK(tai("prove " + q(kb) + " '(K a 0 q)'").code == 1);
  CHECK(tai("prove " + q(kb) + " '(K a 0 nope)'").code == 2);
  CHECK(tai("prove " + q(kb) + " '(K a 3 q)' --budget-depth 1").code == 1);
  CHECK(tai("prove " + q(kb) + " '(K a 3 q)' --budget-depth 0").code == 2);

  Result s = tai("prove " + q(kb) + " '(K a 3 q)' --format structured");
  CHECK(s.code == 0);
  CHECK(s.out.find("\"rule\"") != std::string::npos);

  // the premises matter: q is not derivable without the second attitude
  fs::path weak = scratch() / "weak.tai";
  spit(weak, "(const a Agent)\n(pred p ())\n(pred q ())\n(K a 1 p)\n");
  CHECK(tai("verify " + q(proof) + " " + q(weak)).code == 1);
}

TEST_CASE("plan and certify") {
  fs::path m = scenario("monoxide.tai");
  Result r = tai("plan " + q(m) + " family-awake --horizon 2 --format structured");
  CHECK(r.code == 0);
  CHECK(r.out.find("[\"tv\",\"max-volume\",2]") != std::string::npos);

  fs::path cert = scratch() / "none.cert";
  r = tai("plan " + q(m) + " family-awake --horizon 1 --certify-nonexistence " + q(cert));
  CHECK(r.code == 1);
  CHECK(r.out.find("no plan") != std::string::npos);
  CHECK(tai("verify " + q(cert) + " " + q(m)).code == 0);

  std::string text = slurp(cert);
  auto at = text.find("\"horizon\":1");
  REQUIRE(at != std::string::npos);
  spit(cert, text.replace(at, 11, "\"horizon\":2"));
  CHECK(tai("verify " + q(cert) + " " + q(m)).code == 1);

  CHECK(tai("plan " + q(m) + " family-awake --horizon 40").code == 1);
  CHECK(tai("plan " + q(m) + " family-awake --planner nobody").code == 2);
}

TEST_CASE("run writes verifiable artifacts") {
  for (const char* name : {"storm.tai", "monoxide.tai"}) {
    fs::path out = scratch() / name;
    REQUIRE(tai("run " + q(scenario(name)) + " --seed 3 --out " + q(out)).code == 0);
    CHECK(fs::exists(out / "transcript.txt"));
    CHECK(fs::exists(out / "transcript.jsonl"));
    int count = 0;
    for (const auto& e : fs::directory_iterator(out / "artifacts")) {
      if (e.path().extension() == ".kb") continue;
      fs::path kb = e.path();
      kb.replace_extension(".kb");
      INFO(e.path());
      CHECK(tai("verify " + q(e.path()) + " " + q(kb)).code == 0);
      ++count;
    }
    CHECK(count > 0);

    fs::path again = scratch() / (std::string(name) + ".again");
    REQUIRE(tai("run " + q(scenario(name)) + " --seed 3 --out " + q(again)).code == 0);
    CHECK(slurp(out / "transcript.txt") == slurp(again / "transcript.txt"));
    CHECK(slurp(out / "transcript.jsonl") == slurp(again / "transcript.jsonl"));
  }

  fs::path empty = scratch() / "empty.tai";
  spit(empty, "");
  Result r = tai("run " + q(empty) + " --out " + q(scratch() / "empty"));
  CHECK(r.code == 0);
  CHECK(slurp(scratch() / "empty" / "transcript.txt").empty());
}

TEST_CASE("mutated artifacts are rejected") {
  fs::path out = scratch() / "mut";
  REQUIRE(tai("run " + q(scenario("storm.tai")) + " --out " + q(out)).code == 0);
  fs::path proof = out / "artifacts" / "006-plan-a_h.proof";
  fs::path kb = out / "artifacts" / "006-plan-a_h.kb";
  REQUIRE(fs::exists(proof));
  const std::string original = slurp(proof);
  const std::vector<std::pair<std::string, std::string>> swaps = {
      {" 7)", " 9)"}, {"a_c", "a_p"}, {"\"ImpE\"", "\"AndE\""}, {"\"premises\":[", "\"premises\":[0,"}};
  for (const auto& [from, to] : swaps) {
    auto at = original.rfind(from);
    REQUIRE_MESSAGE(at != std::string::npos, from);
    std::string bad = original;
    spit(proof, bad.replace(at, from.size(), to));
    INFO(from << " -> " << to);
    CHECK(tai("verify " + q(proof) + " " + q(kb)).code == 1);
  }
  spit(proof, "not a proof");
  CHECK(tai("verify " + q(proof) + " " + q(kb)).code == 1);
  spit(proof, original);
  CHECK(tai("verify " + q(proof) + " " + q(kb)).code == 0);
  CHECK(tai("verify " + q(proof) + " " + q(out / "nothing.kb")).code == 2);
}
