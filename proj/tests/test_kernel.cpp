#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tai/errors.hpp"
#include "tai/knowledge_base.hpp"
#include "tai/moment_order.hpp"
#include "tai/parser.hpp"

using namespace tai;

namespace {

Signature storm_sig() {
  Signature s;
  for (const char* a : {"a_c", "a_h", "a_p", "j"}) s.declare_constant(a, sorts::Agent);
  s.declare_sort("Place");
  s.declare_sort("Service");
  s.declare_sort("Supply");
  s.declare_sort("Day");
  s.declare_constant("store", Sort{"Place"});
  s.declare_constant("weather", Sort{"Service"});
  s.declare_constant("today", Sort{"Day"});
  s.declare_constant("tomorrow", Sort{"Day"});
  s.declare_function("crowded", {Sort{"Place"}}, sorts::Boolean);
  s.declare_function("unusual", {}, sorts::Boolean);
  s.declare_function("storm", {}, sorts::Boolean);
  s.declare_function("check", {Sort{"Service"}}, sorts::ActionType);
  s.declare_function("positive", {Sort{"Supply"}}, sorts::Boolean);
  s.declare_function("shops", {sorts::Agent, Sort{"Day"}}, sorts::Boolean);
  s.declare_function("shopping", {sorts::Agent}, sorts::ActionType);
  s.declare_function("req", {sorts::Agent, sorts::ActionType}, sorts::ActionType);
  s.declare_function("recc", {sorts::ActionType}, sorts::ActionType);
  s.declare_function("warn", {}, sorts::ActionType);
  s.declare_moment_alias("t0", 0);
  s.declare_moment_alias("t1", 1);
  s.declare_moment_alias("t3", 3);
  s.declare_moment_alias("t4", 4);
  s.declare_moment_alias("t5", 5);
  return s;
}

const std::vector<std::string> kStorm = {
    "(B a_c t0 (implies (crowded store) unusual))",
    "(P a_c t1 (crowded store))",
    "(forall (t Moment) (O a_c t unusual (happens (action a_c (check weather)) (next t))))",
    "(forall (t Moment) (B a_c t (forall (u Moment) (O a_c u unusual (happens (action a_c (check weather)) (next u))))))",
    "(forall (a Agent) (implies (happens (action a (check weather)) t3) (K a t4 storm)))",
    "(forall (t Moment) (O a_c t storm (S a_c a_h (next t) storm)))",
    "(forall (t Moment) (O a_h t storm (forall (s Supply) (positive s))))",
    "(K a_h t5 (implies (or (shops j today) (shops j tomorrow)) (forall (s Supply) (positive s))))",
    "(forall (t Moment) (B a_h t (implies (happens (action a_c (recc (shopping j))) t) (shops j today))))",
    "(forall (t Moment) (B a_h t (implies (happens (action a_h (req a_c (shopping j))) t) (happens (action a_c (recc (shopping j))) t))))",
};

// ---- de Bruijn oracle: independent of Formula::operator== -----------------

std::string db_term(const Term& t, const std::vector<std::string>& bound) {
  if (t.is_variable()) {
    for (std::size_t i = bound.size(); i-- > 0;)
      if (bound[i] == t.name()) return "#" + std::to_string(bound.size() - 1 - i);
    return "free:" + t.name();
  }
  std::string s = "(" + t.name();
  for (const Term& a : t.args()) s += " " + db_term(a, bound);
  return s + ")";
}

std::string db(const Formula& f, std::vector<std::string>& bound) {
  std::string s = "[" + std::to_string(static_cast<int>(f.kind()));
  if (f.is(FormulaKind::Ought)) s += to_string(f.flavor());
  if (f.is(FormulaKind::Atom)) s += db_term(f.atom_term(), bound);
  for (const Term& a : f.args()) s += " " + db_term(a, bound);
  if (f.is_quantifier()) {
    s += " " + f.var().sort().name();
    bound.push_back(f.var().name());
    s += db(f.body(), bound);
    bound.pop_back();
  } else {
    for (const Formula& c : f.subs()) s += db(c, bound);
  }
  return s + "]";
}

std::string db(const Formula& f) {
  std::vector<std::string> b;
  return db(f, b);
}

// ---- random formulas over a small signature ------------------------------

struct Gen {
  std::mt19937 rng;
  Signature sig;
  explicit Gen(unsigned seed) : rng(seed) {
    sig.declare_sort("Obj");
    sig.declare_constant("c1", Sort{"Obj"});
    sig.declare_constant("c2", Sort{"Obj"});
    sig.declare_constant("ag", sorts::Agent);
    sig.declare_constant("bg", sorts::Agent);
    sig.declare_function("p", {Sort{"Obj"}}, sorts::Boolean);
    sig.declare_function("q", {Sort{"Obj"}, Sort{"Obj"}}, sorts::Boolean);
    sig.declare_function("f", {Sort{"Obj"}}, Sort{"Obj"});
    sig.declare_function("go", {Sort{"Obj"}}, sorts::ActionType);
  }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Term obj(const std::vector<Term>& scope, int depth) {
    int k = pick(depth > 0 ? 4 : 3);
    if (k == 3) return Term::apply(sig, sig.function("f"), {obj(scope, depth - 1)});
    if (k < 2 || scope.empty())
      return Term::constant(pick(2) ? "c1" : "c2", Sort{"Obj"});
    return scope[pick(static_cast<int>(scope.size()))];
  }
  Term moment() {
    Term t = Term::integer(pick(4));
    return pick(3) == 0 ? Term::apply(sig, sig.function(sym::next), {t}) : t;
  }
  Term agent() { return Term::constant(pick(2) ? "ag" : "bg", sorts::Agent); }

  Formula formula(std::vector<Term>& scope, int depth) {
    int k = depth <= 0 ? pick(2) : pick(14);
    switch (k) {
      case 0:
        return Formula::atom(Term::apply(sig, sig.function("p"), {obj(scope, 1)}));
      case 1:
        return Formula::atom(Term::apply(sig, sig.function("q"), {obj(scope, 1), obj(scope, 1)}));
      case 2: return Formula::negation(formula(scope, depth - 1));
      case 3: return Formula::conjunction({formula(scope, depth - 1), formula(scope, depth - 1)});
      case 4: return Formula::disjunction({formula(scope, depth - 1), formula(scope, depth - 1)});
      case 5: return Formula::implication(formula(scope, depth - 1), formula(scope, depth - 1));
      case 6:
      case 7: {
        static const char* names[] = {"x", "y", "z"};
        Term v = Term::variable(names[pick(3)], Sort{"Obj"});
        scope.push_back(v);
        Formula b = formula(scope, depth - 1);
        scope.pop_back();
        return k == 6 ? Formula::forall(v, b) : Formula::exists(v, b);
      }
      case 8: return Formula::modal(FormulaKind::Knows, {agent(), moment()}, formula(scope, depth - 1));
      case 9: return Formula::modal(FormulaKind::Believes, {agent(), moment()}, formula(scope, depth - 1));
      case 10: return Formula::modal(FormulaKind::Says, {agent(), agent(), moment()}, formula(scope, depth - 1));
      case 11: return Formula::modal(FormulaKind::Common, {moment()}, formula(scope, depth - 1));
      case 12:
        return Formula::ought(agent(), moment(), formula(scope, depth - 1),
                              happens(sig, action(sig, agent(), Term::apply(sig, sig.function("go"), {obj(scope, 1)})), moment()),
                              static_cast<Flavor>(pick(3)));
      default: return Formula::falsum();
    }
  }

  // Rename every binder consistently to a fresh name.
  Formula rename(const Formula& f) {
    if (f.is_quantifier()) {
      Term nv = Term::variable("r" + std::to_string(counter++), f.var().sort());
      Formula body = substitute(f.body(), Substitution{{f.var().name(), nv}});
      body = rename(body);
      return f.is(FormulaKind::ForAll) ? Formula::forall(nv, body) : Formula::exists(nv, body);
    }
    switch (f.kind()) {
      case FormulaKind::Atom:
      case FormulaKind::False: return f;
      case FormulaKind::Not: return Formula::negation(rename(f.body()));
      case FormulaKind::And:
      case FormulaKind::Or: {
        std::vector<Formula> cs;
        for (const Formula& c : f.subs()) cs.push_back(rename(c));
        return f.is(FormulaKind::And) ? Formula::conjunction(cs) : Formula::disjunction(cs);
      }
      case FormulaKind::Implies: return Formula::implication(rename(f.lhs()), rename(f.rhs()));
      case FormulaKind::Ought:
        return Formula::ought(f.agent(), f.time(), rename(f.condition()), rename(f.body()), f.flavor());
      default: return Formula::modal(f.kind(), f.args(), rename(f.body()));
    }
  }
  int counter = 0;
};

}  // namespace

TEST_CASE("parse yields well-sorted terms and formulas") {
  Signature sig;
  sig.declare_constant("jack", sorts::Agent);
  sig.declare_constant("running", sorts::ActionType);
  sig.declare_constant("f", sorts::Fluent);
  Term e = parse_term("(action jack running)", sig);
  CHECK(e.sort() == sorts::Action);
  CHECK(sig.is_subsort(e.sort(), sorts::Event));
  Formula h = parse_formula("(happens (action jack running) 3)", sig);
  CHECK(h.is(FormulaKind::Atom));
  CHECK(pretty(h) == "(happens (action jack running) 3)");

  CHECK_THROWS_AS(parse_formula("(holds 3 f)", sig), SortError);
  try {
    parse_formula("(holds 3 f)", sig);
  } catch (const SortError& err) {
    CHECK(err.expected() == "Fluent");
    CHECK(err.found() == "Moment");
    CHECK(err.position().line == 1);
    CHECK(err.position().column == 8);
  }
  CHECK_THROWS_AS(parse_formula("(holds f jack)", sig), SortError);
  CHECK_THROWS_AS(parse_formula("(holds g 3)", sig), UnknownSymbol);
  CHECK_THROWS_AS(parse_formula("(holds f 3", sig), SyntaxError);
  CHECK_THROWS_AS(parse_formula("(happens (action jack running))", sig), SyntaxError);
  CHECK(std::holds_alternative<Term>(parse("(action jack running)", sig)));
  CHECK(std::holds_alternative<Formula>(parse("(holds f 3)", sig)));
}

TEST_CASE("next folds on integer literals") {
  Signature sig;
  CHECK(parse_term("(next 3)", sig) == Term::integer(4));
  CHECK(parse_term("(next (next 0))", sig) == Term::integer(2));
}

TEST_CASE("signature hygiene") {
  Signature sig;
  CHECK_THROWS_AS(sig.declare_constant("holds", sorts::Fluent), DeclarationError);
  CHECK_THROWS_AS(sig.declare_sort("Agent"), DeclarationError);
  CHECK_THROWS_AS(sig.declare_constant("forall", sorts::Agent), DeclarationError);
  CHECK_THROWS_AS(sig.declare_constant("?x", sorts::Agent), DeclarationError);
  CHECK_THROWS_AS(sig.declare_constant("_c", sorts::Agent), DeclarationError);
  CHECK_THROWS_AS(sig.declare_constant("3", sorts::Agent), DeclarationError);
  sig.declare_constant("a", sorts::Agent);
  CHECK_THROWS_AS(sig.declare_constant("a", sorts::Agent), DeclarationError);
  CHECK_THROWS_AS(sig.declare_function("g", {Sort{"Nope"}}, sorts::Boolean), UnknownSymbol);
}

TEST_CASE("storm formulas round-trip through pretty") {
  Signature sig = storm_sig();
  for (const auto& text : kStorm) {
    Formula f = parse_formula(text, sig);
    CHECK(f.closed());
    Formula g = parse_formula(pretty(f), sig);
    CHECK(f == g);
    CHECK(pretty(g) == pretty(f));
    CHECK(db(f) == db(g));
  }
}

TEST_CASE("random formulas round-trip and alpha-equivalence agrees with de Bruijn") {
  Gen gen(20260415u);
  for (int i = 0; i < 1000; ++i) {
    std::vector<Term> scope;
    Formula f = gen.formula(scope, 4);
    Formula back = parse_formula(pretty(f), gen.sig);
    REQUIRE(back == f);
    CHECK(db(back) == db(f));

    Formula r = gen.rename(f);
    CHECK(db(r) == db(f));
    CHECK(r == f);
    CHECK(r.hash() == f.hash());

    std::vector<Term> s2;
    Formula other = gen.formula(s2, 4);
    CHECK((other == f) == (db(other) == db(f)));
  }
}

TEST_CASE("substitution avoids capture") {
  Gen gen(1);
  Signature& sig = gen.sig;
  Term x = Term::variable("x", Sort{"Obj"});
  Term y = Term::variable("y", Sort{"Obj"});
  Formula body = Formula::atom(Term::apply(sig, sig.function("q"), {x, y}));
  Formula f = Formula::forall(y, body);
  Formula g = substitute(f, Substitution{{"x", y}});
  // y stays free after substitution; the binder was renamed.
  CHECK(g.free_variables().size() == 1);
  CHECK(g.free_variables()[0].name() == "y");
  CHECK(db(g) == "[6 Obj[0(q free:y #0)]]");

  Formula ground = substitute(sig, f, {{x, Term::constant("c1", Sort{"Obj"})}});
  CHECK(pretty(ground) == "(forall (y Obj) (q c1 y))");
  CHECK_THROWS_AS(substitute(sig, f, {{x, Term::constant("ag", sorts::Agent)}}), SortError);
}

TEST_CASE("substitution preserves well-sortedness") {
  Gen gen(7);
  for (int i = 0; i < 300; ++i) {
    std::vector<Term> scope{Term::variable("w", Sort{"Obj"})};
    Formula f = gen.formula(scope, 3);
    Term c = gen.obj({}, 2);
    Formula g = substitute(gen.sig, f, {{Term::variable("w", Sort{"Obj"}), c}});
    CHECK_NOTHROW(sort_check(gen.sig, g));
  }
}

TEST_CASE("moment order") {
  Signature sig;
  sig.declare_constant("u", sorts::Moment);
  sig.declare_constant("v", sorts::Moment);
  sig.declare_constant("w", sorts::Moment);
  std::vector<Formula> facts = {parse_formula("(prior u v)", sig), parse_formula("(prior v 7)", sig)};
  MomentOrder o(facts);
  Term u = parse_term("u", sig), v = parse_term("v", sig), w = parse_term("w", sig);
  CHECK(o.less(Term::integer(2), Term::integer(5)));
  CHECK_FALSE(o.less(Term::integer(5), Term::integer(5)));
  CHECK(o.less_equal(Term::integer(5), Term::integer(5)));
  CHECK(o.less(u, v));
  CHECK(o.less(u, Term::integer(9)));
  CHECK_FALSE(o.less(v, u));
  CHECK_FALSE(o.comparable(u, w));
  CHECK(o.less(u, parse_term("(next u)", sig)));
  CHECK(o.less_equal(parse_term("(next u)", sig), v));
}

TEST_CASE("knowledge base") {
  Signature sig;
  sig.declare_constant("a", sorts::Agent);
  sig.declare_constant("f", sorts::Fluent);
  KnowledgeBase kb(sig);
  Formula h = parse_formula("(holds f 1)", kb.signature());
  CHECK(kb.add(h, Provenance::axiom(), "h1"));
  CHECK_FALSE(kb.add(h));
  CHECK(kb.size() == 1);
  CHECK(kb.find_label("h1"));
  Formula c = parse_formula("(forall (t Moment) (holds f t))", kb.signature());
  CHECK(kb.add(c, Provenance::contract("a")));
  CHECK(kb.contract("a").size() == 1);
  CHECK(kb.remove(h) == 1);
  std::string text = kb.to_text();
  CHECK(text.find("contract:a") != std::string::npos);
}
