#include "tai/prover/proof_io.hpp"

#include <json.hpp>
#include <map>
#include <sstream>

#include "tai/errors.hpp"
#include "tai/parser.hpp"

namespace tai::prover {

using json = nlohmann::ordered_json;

namespace {

void eigen_in(const Term& t, std::map<std::string, Sort>& out) {
  if (t.null()) return;
  if (t.is_constant() && !t.name().empty() && t.name()[0] == '_')
    out.emplace(t.name(), t.sort());
  for (const Term& a : t.args()) eigen_in(a, out);
}

void eigen_in(const Formula& f, std::map<std::string, Sort>& out) {
  if (f.is(FormulaKind::Atom)) eigen_in(f.atom_term(), out);
  for (const Term& a : f.args()) eigen_in(a, out);
  for (const Formula& s : f.subs()) eigen_in(s, out);
}

std::string after(const std::string& s, const std::string& prefix) {
  return s.substr(prefix.size());
}

bool starts(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

std::string serialize_proof(const Proof& p) {
  auto nodes = post_order(p);
  std::map<std::string, Sort> eigen;
  std::map<const ProofNode*, std::size_t> ids;
  for (const ProofNode* n : nodes) {
    eigen_in(n->conclusion, eigen);
    eigen_in(n->term, eigen);
  }

  std::ostringstream out;
  json header;
  header["kind"] = "proof";
  header["goal"] = pretty(p->conclusion);
  header["root"] = nodes.size() - 1;
  json ej = json::array();
  for (const auto& [name, sort] : eigen) ej.push_back({name, sort.name()});
  header["eigen"] = ej;
  out << header.dump() << "\n";

  // A shared subproof appears once per use; ids follow the tree walk.
  std::size_t id = 0;
  std::vector<std::size_t> stack;
  for (const ProofNode* n : nodes) {
    json r;
    r["id"] = id;
    r["rule"] = rule_name(n->rule);
    r["conclusion"] = pretty(n->conclusion);
    std::vector<std::size_t> prem(stack.end() - n->premises.size(), stack.end());
    stack.resize(stack.size() - n->premises.size());
    r["premises"] = prem;
    json side = json::array();
    if (n->rule == Rule::Hyp)
      side.push_back(n->hyp_label < 0 ? "gamma" : "assume:" + std::to_string(n->hyp_label));
    for (int d : n->discharged) side.push_back("discharge:" + std::to_string(d));
    if (!n->term.null()) {
      if (n->rule == Rule::ForallI || n->rule == Rule::ExistsE)
        side.push_back("eigen:" + n->term.name() + ":" + n->term.sort().name());
      else
        side.push_back("term:" + pretty(n->term));
    }
    if (!n->time_from.null()) side.push_back("time-from:" + pretty(n->time_from));
    if (!n->time_to.null()) side.push_back("time-to:" + pretty(n->time_to));
    r["side"] = side;
    out << r.dump() << "\n";
    stack.push_back(id++);
  }
  return out.str();
}

Proof parse_proof(std::string_view text, const Signature& sig) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<json> records;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw FormatError(std::string("proof document: ") + e.what());
    }
  }
  if (records.empty() || records[0].value("kind", "") != "proof")
    throw FormatError("proof document: missing header");

  ParseContext ctx{sig};
  try {
    for (const auto& e : records[0].at("eigen")) {
      std::string sort = e.at(1).get<std::string>();
      if (!sig.has_sort(sort)) throw FormatError("proof document: unknown sort " + sort);
      ctx.eigen.emplace(e.at(0).get<std::string>(), Sort{sort});
    }

    std::vector<Proof> built;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const json& r = records[i];
      if (r.at("id").get<std::size_t>() != built.size())
        throw FormatError("proof document: ids out of order at record " + std::to_string(i));
      ProofNode n;
      auto rule = rule_from_name(r.at("rule").get<std::string>());
      if (!rule) throw FormatError("proof document: unknown rule " + r.at("rule").dump());
      n.rule = *rule;
      n.conclusion = parse_formula(read_sexpr(r.at("conclusion").get<std::string>()), ctx);
      for (const auto& pid : r.at("premises")) {
        auto k = pid.get<std::size_t>();
        if (k >= built.size()) throw FormatError("proof document: forward premise reference");
        n.premises.push_back(built[k]);
      }
      for (const auto& sj : r.at("side")) {
        std::string s = sj.get<std::string>();
        if (s == "gamma") {
          n.hyp_label = -1;
        } else if (starts(s, "assume:")) {
          n.hyp_label = std::stoi(after(s, "assume:"));
        } else if (starts(s, "discharge:")) {
          n.discharged.push_back(std::stoi(after(s, "discharge:")));
        } else if (starts(s, "eigen:")) {
          std::string rest = after(s, "eigen:");
          std::string name = rest.substr(0, rest.find(':'));
          auto it = ctx.eigen.find(name);
          if (it == ctx.eigen.end()) throw FormatError("proof document: undeclared eigenconstant " + name);
          n.term = Term::constant(name, it->second);
        } else if (starts(s, "term:")) {
          n.term = parse_term(read_sexpr(after(s, "term:")), ctx);
        } else if (starts(s, "time-from:")) {
          n.time_from = parse_term(read_sexpr(after(s, "time-from:")), ctx);
        } else if (starts(s, "time-to:")) {
          n.time_to = parse_term(read_sexpr(after(s, "time-to:")), ctx);
        } else {
          throw FormatError("proof document: unknown side entry " + s);
        }
      }
      built.push_back(make_node(std::move(n)));
    }
    if (built.empty()) throw FormatError("proof document: no nodes");
    std::size_t root = records[0].at("root").get<std::size_t>();
    if (root != built.size() - 1) throw FormatError("proof document: root is not the last node");
    return built.back();
  } catch (const json::exception& e) {
    throw FormatError(std::string("proof document: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw FormatError("proof document: bad label");
  }
}

}  // namespace tai::prover
