#include <json.hpp>

#include "tai/agents.hpp"

namespace tai::agents {

std::string Transcript::human() const {
  std::string out;
  for (const Event& e : events) {
    out += "t=" + std::to_string(e.tick) + " " + e.kind;
    if (!e.agent.empty()) out += " " + e.agent;
    for (const auto& [k, v] : e.fields) out += "\n    " + k + ": " + v;
    for (const auto& a : e.artifacts) out += "\n    artifact: " + a;
    out += "\n";
  }
  return out;
}

std::string Transcript::structured() const {
  std::string out;
  for (const Event& e : events) {
    nlohmann::ordered_json j;
    j["tick"] = e.tick;
    j["kind"] = e.kind;
    j["agent"] = e.agent;
    for (const auto& [k, v] : e.fields) j[k] = v;
    j["artifacts"] = e.artifacts;
    out += j.dump() + "\n";
  }
  return out;
}

const Event* Transcript::find(const std::string& kind, const std::string& agent) const {
  for (const Event& e : events)
    if (e.kind == kind && (agent.empty() || e.agent == agent)) return &e;
  return nullptr;
}

}  // namespace tai::agents
