#include <algorithm>
#include <functional>
#include <map>

#include "tai/agents.hpp"
#include "tai/document.hpp"
#include "tai/parser.hpp"

namespace tai::agents {

namespace {

const std::map<std::string, long Config::*> kLongKeys = {
    {"horizon", &Config::horizon}, {"delta", &Config::delta}, {"ticks", &Config::ticks},
    {"start", &Config::start},     {"ceiling", &Config::ceiling},
};

long number(const SExpr& e) {
  if (e.is_list) throw SyntaxError("expected an integer", e.pos);
  try {
    std::size_t used = 0;
    long v = std::stol(e.atom, &used);
    if (used == e.atom.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw SyntaxError("expected an integer, found '" + e.atom + "'", e.pos);
}

void arity(const SExpr& e, std::size_t n, const char* shape) {
  if (e.items.size() != n) throw SyntaxError(std::string("expected ") + shape, e.pos);
}

bool is_decl(const std::string& h) {
  return h == "sort" || h == "fun" || h == "pred" || h == "const" || h == "moment" || h == "agent";
}

// Runs f on each form; with a sink, errors are collected instead of thrown.
void each(const std::vector<SExpr>& forms, std::vector<std::string>* sink,
          const std::function<void(const SExpr&)>& f) {
  for (const SExpr& e : forms) {
    if (!sink) {
      f(e);
      continue;
    }
    try {
      f(e);
    } catch (const Error& err) {
      std::string msg = err.what();
      if (!dynamic_cast<const PositionedError*>(&err) && e.pos.line > 0) msg = e.pos.str() + ": " + msg;
      sink->push_back(msg);
    }
  }
}

Scenario load(std::string_view text, std::vector<std::string>* sink) {
  std::vector<SExpr> forms;
  try {
    forms = read_sexprs(text);
  } catch (const SyntaxError& e) {
    if (!sink) throw;
    sink->push_back(e.what());
    return {};
  }

  Signature sig;
  std::vector<std::pair<std::string, Mode>> agent_decls;
  each(forms, sink, [&](const SExpr& e) {
    if (e.head() == "agent") {
      arity(e, 3, "(agent id level1|level2)");
      const SExpr& m = e.items[2];
      if (m.is_list || (m.atom != "level1" && m.atom != "level2"))
        throw SyntaxError("agent mode must be level1 or level2", m.pos);
      if (e.items[1].is_list) throw SyntaxError("expected an agent name", e.items[1].pos);
      if (!sig.constant(e.items[1].atom)) {
        try {
          sig.declare_constant(e.items[1].atom, sorts::Agent);
        } catch (const DeclarationError& d) {
          throw SyntaxError(d.what(), e.pos);
        }
      } else if (*sig.constant(e.items[1].atom) != sorts::Agent) {
        throw SortError("Agent", sig.constant(e.items[1].atom)->name(), e.items[1].pos);
      }
      agent_decls.emplace_back(e.items[1].atom, m.atom == "level2" ? Mode::Level2 : Mode::Level1);
    } else {
      apply_declaration(sig, e);
    }
  });

  Scenario s;
  s.gamma = KnowledgeBase(std::move(sig));
  const auto sigp = s.gamma.signature_ptr();
  for (const auto& [name, mode] : agent_decls)
    s.agents.push_back(AgentSpec{Term::constant(name, sorts::Agent), mode, {}, KnowledgeBase(sigp)});

  ParseContext ctx{*sigp};
  auto agent_at = [&](const SExpr& e) -> AgentSpec& {
    if (!e.is_list)
      for (auto& a : s.agents)
        if (a.id.name() == e.atom) return a;
    throw UnknownSymbol(e.is_list ? e.str() : e.atom, e.pos);
  };
  auto formula_at = [&](const SExpr& e) {
    Formula f = parse_formula(e, ctx);
    if (!f.closed()) throw SortError("closed formula", "free variable " + f.free_variables().front().name(), e.pos);
    return f;
  };

  each(forms, sink, [&](const SExpr& e) {
    const std::string& h = e.head();
    if (is_decl(h)) return;
    if (auto it = kLongKeys.find(h); it != kLongKeys.end()) {
      arity(e, 2, "(key integer)");
      long v = number(e.items[1]);
      if (v < 0 || (h == "horizon" && v == 0)) throw SyntaxError(h + " must be positive", e.items[1].pos);
      s.config.*(it->second) = v;
    } else if (h == "depth" || h == "size" || h == "candidates") {
      arity(e, 2, "(key integer)");
      long v = number(e.items[1]);
      if (v <= 0) throw SyntaxError(h + " must be positive", e.items[1].pos);
      if (h == "depth") s.config.budget.max_depth = static_cast<int>(v);
      if (h == "size") s.config.budget.max_formula_size = static_cast<int>(v);
      if (h == "candidates") s.config.budget.max_candidates = static_cast<int>(v);
    } else if (h == "formula") {
      if (e.items.size() == 3) {
        s.gamma.add(formula_at(e.items[2]), Provenance::axiom(), e.items[1].atom);
      } else {
        arity(e, 4, "(formula label [provenance] f)");
        s.gamma.add(formula_at(e.items[3]), parse_provenance(e.items[2].atom, e.items[2].pos), e.items[1].atom);
      }
    } else if (h == "contract") {
      arity(e, 4, "(contract agent label f)");
      AgentSpec& a = agent_at(e.items[1]);
      Formula f = formula_at(e.items[3]);
      s.gamma.add(f, Provenance::contract(a.id.name()), e.items[2].atom);
      a.contract.push_back(f);
      a.store.add(f, Provenance::contract(a.id.name()), e.items[2].atom);
    } else if (h == "store") {
      arity(e, 3, "(store agent f)");
      agent_at(e.items[1]).store.add(formula_at(e.items[2]));
    } else if (h == "percept" || h == "observe") {
      arity(e, 4, h == "percept" ? "(percept tick agent f)" : "(observe tick agent f)");
      Scheduled item{number(e.items[1]), h == "percept" ? Scheduled::Kind::Percept : Scheduled::Kind::Observe,
                     agent_at(e.items[2]).id, formula_at(e.items[3])};
      sort_check(*sigp, item.formula);
      s.schedule.push_back(item);
    } else if (h == "message") {
      arity(e, 3, "(message tick (S ...))");
      Formula f = formula_at(e.items[2]);
      sort_check(*sigp, f);
      if (!f.is(FormulaKind::Says)) throw SyntaxError("a message must be an S formula", e.items[2].pos);
      agent_at(SExpr{false, f.agent().name(), {}, e.items[2].pos});
      s.schedule.push_back({number(e.items[1]), Scheduled::Kind::Message, f.agent(), f});
    } else {
      s.gamma.add(formula_at(e));
    }
  });
  std::stable_sort(s.schedule.begin(), s.schedule.end(),
                   [](const Scheduled& a, const Scheduled& b) { return a.tick < b.tick; });
  return s;
}

}  // namespace

Scenario load_scenario(std::string_view text) { return load(text, nullptr); }

std::vector<std::string> check_scenario(std::string_view text) {
  std::vector<std::string> errors;
  load(text, &errors);
  return errors;
}

}  // namespace tai::agents
