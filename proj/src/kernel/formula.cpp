#include "tai/formula.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "tai/errors.hpp"

namespace tai {

namespace {

void term_variables(const Term& t, std::vector<Term>& out) {
  if (t.ground()) return;
  if (t.is_variable()) {
    for (const Term& v : out)
      if (v.name() == t.name()) return;
    out.push_back(t);
    return;
  }
  for (const Term& a : t.args()) term_variables(a, out);
}

void add_vars(std::vector<Term>& into, const std::vector<Term>& from,
              const std::string* except = nullptr) {
  for (const Term& v : from) {
    if (except && v.name() == *except) continue;
    bool seen = false;
    for (const Term& w : into)
      if (w.name() == v.name()) {
        seen = true;
        break;
      }
    if (!seen) into.push_back(v);
  }
}

const char* keyword(FormulaKind k) {
  switch (k) {
    case FormulaKind::Perceives: return "P";
    case FormulaKind::Knows: return "K";
    case FormulaKind::Common: return "C";
    case FormulaKind::Says: return "S";
    case FormulaKind::Believes: return "B";
    case FormulaKind::Desires: return "D";
    case FormulaKind::Intends: return "I";
    default: return "";
  }
}

}  // namespace

const char* to_string(Flavor f) {
  switch (f) {
    case Flavor::Legal: return "legal";
    case Flavor::Moral: return "moral";
    default: return "unflagged";
  }
}

Formula Formula::make(Node n) {
  std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
  h = hash_combine(h, static_cast<std::size_t>(n.flavor));
  std::vector<Term> fv;
  if (!n.atom.null()) {
    h = hash_combine(h, n.atom.hash());
    n.size += n.atom.size();
    term_variables(n.atom, fv);
  }
  for (const Term& a : n.args) {
    h = hash_combine(h, a.hash());
    n.size += a.size();
    term_variables(a, fv);
  }
  const std::string* bound = nullptr;
  if (!n.var.null()) {
    h = hash_combine(h, std::hash<std::string>{}(n.var.sort().name()));
    bound = &n.var.name();
  }
  for (const Formula& s : n.subs) {
    h = hash_combine(h, s.hash());
    n.size += s.size();
    add_vars(fv, s.free_variables(), bound);
  }
  n.has_meta = std::any_of(fv.begin(), fv.end(),
                           [](const Term& v) { return v.is_meta(); });
  n.free_vars = std::move(fv);
  n.hash = h;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::atom(Term t) {
  Node n{FormulaKind::Atom};
  n.atom = std::move(t);
  return make(std::move(n));
}

Formula Formula::falsum() { return make(Node{FormulaKind::False}); }

Formula Formula::negation(Formula f) {
  Node n{FormulaKind::Not};
  n.subs.push_back(std::move(f));
  return make(std::move(n));
}

Formula Formula::conjunction(std::vector<Formula> fs) {
  if (fs.size() == 1) return fs.front();
  if (fs.empty()) throw Error("empty conjunction");
  Node n{FormulaKind::And};
  n.subs = std::move(fs);
  return make(std::move(n));
}

Formula Formula::disjunction(std::vector<Formula> fs) {
  if (fs.size() == 1) return fs.front();
  if (fs.empty()) throw Error("empty disjunction");
  Node n{FormulaKind::Or};
  n.subs = std::move(fs);
  return make(std::move(n));
}

Formula Formula::implication(Formula a, Formula b) {
  Node n{FormulaKind::Implies};
  n.subs = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::forall(Term var, Formula body) {
  Node n{FormulaKind::ForAll};
  n.var = std::move(var);
  n.subs.push_back(std::move(body));
  return make(std::move(n));
}

Formula Formula::exists(Term var, Formula body) {
  Node n{FormulaKind::Exists};
  n.var = std::move(var);
  n.subs.push_back(std::move(body));
  return make(std::move(n));
}

Formula Formula::modal(FormulaKind kind, std::vector<Term> args, Formula body) {
  Node n{kind};
  n.args = std::move(args);
  n.subs.push_back(std::move(body));
  return make(std::move(n));
}

Formula Formula::ought(Term agent, Term time, Formula condition, Formula action,
                       Flavor flavor) {
  Node n{FormulaKind::Ought};
  n.args = {std::move(agent), std::move(time)};
  n.subs = {std::move(condition), std::move(action)};
  n.flavor = flavor;
  return make(std::move(n));
}

bool Formula::is_modal() const {
  switch (kind()) {
    case FormulaKind::Perceives:
    case FormulaKind::Knows:
    case FormulaKind::Common:
    case FormulaKind::Says:
    case FormulaKind::Believes:
    case FormulaKind::Desires:
    case FormulaKind::Intends:
    case FormulaKind::Ought:
      return true;
    default:
      return false;
  }
}

std::optional<Term> Formula::audience() const {
  if (kind() == FormulaKind::Says && args().size() == 3) return args()[1];
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace {

using Env = std::vector<std::pair<std::string, std::string>>;

bool term_eq(const Term& a, const Term& b, const Env& env) {
  if (env.empty() || (a.ground() && b.ground())) return a == b;
  if (a.kind() != b.kind()) return false;
  if (a.is_variable()) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      bool la = it->first == a.name(), lb = it->second == b.name();
      if (la || lb) return la && lb;
    }
    return a.name() == b.name() && a.sort() == b.sort();
  }
  if (a.name() != b.name()) return false;
  if (a.is_constant()) return a.sort() == b.sort();
  if (a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!term_eq(a.args()[i], b.args()[i], env)) return false;
  return true;
}

bool formula_eq(const Formula& a, const Formula& b, Env& env) {
  if (a.hash() != b.hash() || a.kind() != b.kind() ||
      a.flavor() != b.flavor() || a.subs().size() != b.subs().size() ||
      a.args().size() != b.args().size())
    return false;
  if (a.is(FormulaKind::Atom)) return term_eq(a.atom_term(), b.atom_term(), env);
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!term_eq(a.args()[i], b.args()[i], env)) return false;
  if (a.is_quantifier()) {
    if (a.var().sort() != b.var().sort()) return false;
    env.emplace_back(a.var().name(), b.var().name());
    bool ok = formula_eq(a.body(), b.body(), env);
    env.pop_back();
    return ok;
  }
  for (std::size_t i = 0; i < a.subs().size(); ++i)
    if (!formula_eq(a.subs()[i], b.subs()[i], env)) return false;
  return true;
}

}  // namespace

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  Env env;
  return formula_eq(a, b, env);
}

// ---------------------------------------------------------------------------
// Substitution

Term substitute(const Term& t, const Substitution& s) {
  if (t.ground() || s.empty()) return t;
  if (t.is_variable()) {
    auto it = s.find(t.name());
    return it == s.end() ? t : it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(substitute(a, s));
    changed = changed || !(args.back() == a);
  }
  if (!changed) return t;
  return Term::apply_unchecked(t.function(), std::move(args));
}

namespace {

bool any_var_named(const std::vector<Term>& vs, const std::string& name) {
  return std::any_of(vs.begin(), vs.end(),
                     [&](const Term& v) { return v.name() == name; });
}

Formula rebuild(const Formula& f, std::vector<Formula> subs,
                std::vector<Term> args, Term var) {
  switch (f.kind()) {
    case FormulaKind::Not: return Formula::negation(subs[0]);
    case FormulaKind::And: return Formula::conjunction(std::move(subs));
    case FormulaKind::Or: return Formula::disjunction(std::move(subs));
    case FormulaKind::Implies: return Formula::implication(subs[0], subs[1]);
    case FormulaKind::ForAll: return Formula::forall(var, subs[0]);
    case FormulaKind::Exists: return Formula::exists(var, subs[0]);
    case FormulaKind::Ought:
      return Formula::ought(args[0], args[1], subs[0], subs[1], f.flavor());
    default: return Formula::modal(f.kind(), std::move(args), subs[0]);
  }
}

}  // namespace

Formula substitute(const Formula& f, const Substitution& s) {
  if (s.empty()) return f;
  // Only bindings for variables that actually occur free matter.
  Substitution live;
  for (const Term& v : f.free_variables()) {
    auto it = s.find(v.name());
    if (it != s.end() && !(it->second.is_variable() &&
                           it->second.name() == v.name()))
      live.insert(*it);
  }
  if (live.empty()) return f;
  switch (f.kind()) {
    case FormulaKind::Atom:
      return Formula::atom(substitute(f.atom_term(), live));
    case FormulaKind::False:
      return f;
    case FormulaKind::ForAll:
    case FormulaKind::Exists: {
      Term var = f.var();
      Substitution inner = live;
      inner.erase(var.name());
      bool captures = false;
      for (const auto& [name, t] : inner) {
        std::vector<Term> tv;
        term_variables(t, tv);
        if (any_var_named(tv, var.name())) captures = true;
      }
      if (captures) {
        std::string fresh = var.name();
        auto taken = [&](const std::string& n) {
          if (any_var_named(f.body().free_variables(), n)) return true;
          for (const auto& [name, t] : inner) {
            std::vector<Term> tv;
            term_variables(t, tv);
            if (any_var_named(tv, n)) return true;
          }
          return false;
        };
        do fresh += "'";
        while (taken(fresh));
        Term renamed = Term::variable(fresh, var.sort());
        inner[var.name()] = renamed;
        var = renamed;
      }
      Formula body = substitute(f.body(), inner);
      return rebuild(f, {body}, {}, var);
    }
    default: {
      std::vector<Formula> subs;
      for (const Formula& c : f.subs()) subs.push_back(substitute(c, live));
      std::vector<Term> args;
      for (const Term& a : f.args()) args.push_back(substitute(a, live));
      return rebuild(f, std::move(subs), std::move(args), Term());
    }
  }
}

Formula substitute(const Signature& sig, const Formula& f,
                   const std::vector<std::pair<Term, Term>>& binding) {
  Substitution s;
  for (const auto& [var, t] : binding) {
    if (!var.is_variable()) throw SortError("variable", var.str());
    if (!sig.is_subsort(t.sort(), var.sort()))
      throw SortError(var.sort().name(), t.sort().name());
    s[var.name()] = t;
  }
  return substitute(f, s);
}

Formula instantiate(const Formula& quantified, const Term& t) {
  return substitute(quantified.body(), Substitution{{quantified.var().name(), t}});
}

bool formula_contains_constant(const Formula& f, const std::string& name) {
  if (f.is(FormulaKind::Atom)) return f.atom_term().contains_constant(name);
  for (const Term& a : f.args())
    if (a.contains_constant(name)) return true;
  for (const Formula& s : f.subs())
    if (formula_contains_constant(s, name)) return true;
  return false;
}

namespace {
void ground_terms(const Term& t, std::vector<Term>& out) {
  if (t.ground() &&
      std::find(out.begin(), out.end(), t) == out.end())
    out.push_back(t);
  if (t.is_application())
    for (const Term& a : t.args()) ground_terms(a, out);
}
}  // namespace

void collect_ground_terms(const Formula& f, std::vector<Term>& out) {
  if (f.is(FormulaKind::Atom)) {
    // The Boolean atom itself is not an individual.
    for (const Term& a : f.atom_term().args()) ground_terms(a, out);
    return;
  }
  for (const Term& a : f.args()) ground_terms(a, out);
  for (const Formula& s : f.subs()) collect_ground_terms(s, out);
}

// ---------------------------------------------------------------------------
// Sort checking

namespace {

void check_term(const Signature& sig, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      if (t.is_meta()) throw SortError("closed syntax", "metavariable " + t.name());
      if (!sig.has_sort(t.sort().name())) throw UnknownSymbol(t.sort().name());
      return;
    case Term::Kind::Constant: {
      if (t.name()[0] == '_') return;  // eigenconstant introduced by a proof
      auto s = sig.constant(t.name());
      if (!s) throw UnknownSymbol(t.name());
      if (!(*s == t.sort())) throw SortError(s->name(), t.sort().name());
      return;
    }
    case Term::Kind::Application: {
      auto fn = sig.function(t.name());
      if (!fn) throw UnknownSymbol(t.name());
      if (fn->args.size() != t.args().size())
        throw SortError(std::to_string(fn->args.size()) + " arguments",
                        std::to_string(t.args().size()));
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        check_term(sig, t.args()[i]);
        if (!sig.is_subsort(t.args()[i].sort(), fn->args[i]))
          throw SortError(fn->args[i].name(), t.args()[i].sort().name());
      }
      return;
    }
  }
}

void expect(const Signature& sig, const Term& t, const Sort& s) {
  check_term(sig, t);
  if (!sig.is_subsort(t.sort(), s)) throw SortError(s.name(), t.sort().name());
}

}  // namespace

void sort_check(const Signature& sig, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      expect(sig, f.atom_term(), sorts::Boolean);
      return;
    case FormulaKind::False:
      return;
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      if (!sig.has_sort(f.var().sort().name()))
        throw UnknownSymbol(f.var().sort().name());
      sort_check(sig, f.body());
      return;
    case FormulaKind::Common:
      expect(sig, f.time(), sorts::Moment);
      break;
    case FormulaKind::Says:
      expect(sig, f.agent(), sorts::Agent);
      if (auto to = f.audience()) expect(sig, *to, sorts::Agent);
      expect(sig, f.time(), sorts::Moment);
      break;
    case FormulaKind::Perceives:
    case FormulaKind::Knows:
    case FormulaKind::Believes:
    case FormulaKind::Desires:
    case FormulaKind::Intends:
    case FormulaKind::Ought:
      expect(sig, f.agent(), sorts::Agent);
      expect(sig, f.time(), sorts::Moment);
      break;
    default:
      break;
  }
  for (const Formula& s : f.subs()) sort_check(sig, s);
}

// ---------------------------------------------------------------------------
// Printing

std::string pretty(const Term& t) { return t.str(); }

namespace {

void print(const Formula& f, std::string& out) {
  auto list = [&](const char* head) {
    out += "(";
    out += head;
    for (const Term& a : f.args()) out += " " + a.str();
    for (const Formula& s : f.subs()) {
      out += " ";
      print(s, out);
    }
    out += ")";
  };
  switch (f.kind()) {
    case FormulaKind::Atom: out += f.atom_term().str(); return;
    case FormulaKind::False: out += "false"; return;
    case FormulaKind::Not: list("not"); return;
    case FormulaKind::And: list("and"); return;
    case FormulaKind::Or: list("or"); return;
    case FormulaKind::Implies: list("implies"); return;
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      out += f.is(FormulaKind::ForAll) ? "(forall (" : "(exists (";
      out += f.var().name() + " " + f.var().sort().name() + ") ";
      print(f.body(), out);
      out += ")";
      return;
    case FormulaKind::Ought:
      list(f.flavor() == Flavor::Legal   ? "O-legal"
           : f.flavor() == Flavor::Moral ? "O-moral"
                                         : "O");
      return;
    default: list(keyword(f.kind())); return;
  }
}

}  // namespace

std::string pretty(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

// ---------------------------------------------------------------------------

Formula holds(const Signature& sig, const Term& fluent, const Term& t) {
  return Formula::atom(Term::apply(sig, sig.function(sym::holds), {fluent, t}));
}

Formula happens(const Signature& sig, const Term& event, const Term& t) {
  return Formula::atom(Term::apply(sig, sig.function(sym::happens), {event, t}));
}

Term action(const Signature& sig, const Term& agent, const Term& type) {
  return Term::apply(sig, sig.function(sym::action), {agent, type});
}

Formula can(const Signature& sig, const Term& agent, const Term& type,
            const Term& t) {
  return Formula::atom(
      Term::apply(sig, sig.function(sym::can), {agent, type, t}));
}

Formula prior(const Signature& sig, const Term& a, const Term& b) {
  return Formula::atom(Term::apply(sig, sig.function(sym::prior), {a, b}));
}

}  // namespace tai
