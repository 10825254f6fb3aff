#include "tai/parser.hpp"

#include <algorithm>

#include "tai/errors.hpp"

namespace tai {

namespace {

bool is_digits(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

const std::map<std::string, FormulaKind>& modal_keywords() {
  static const std::map<std::string, FormulaKind> k = {
      {"P", FormulaKind::Perceives}, {"K", FormulaKind::Knows},
      {"B", FormulaKind::Believes},  {"C", FormulaKind::Common},
      {"S", FormulaKind::Says},      {"D", FormulaKind::Desires},
      {"I", FormulaKind::Intends}};
  return k;
}

Term expect_sort(const SExpr& e, const ParseContext& ctx,
                 const std::vector<Term>& scope, const Sort& want) {
  Term t = parse_term(e, ctx, scope);
  if (!ctx.sig.is_subsort(t.sort(), want))
    throw SortError(want.name(), t.sort().name(), e.pos);
  return t;
}

void arity(const SExpr& e, std::size_t n) {
  if (e.items.size() != n)
    throw SyntaxError("'" + e.head() + "' expects " + std::to_string(n - 1) +
                          " arguments, got " +
                          std::to_string(e.items.size() - 1),
                      e.pos);
}

}  // namespace

Term parse_term(const SExpr& e, const ParseContext& ctx,
                const std::vector<Term>& scope) {
  if (!e.is_list) {
    const std::string& name = e.atom;
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->name() == name) return *it;
    if (is_digits(name)) return Term::integer(std::stol(name));
    if (auto v = ctx.sig.moment_alias(name)) return Term::integer(*v);
    if (auto s = ctx.sig.constant(name)) return Term::constant(name, *s);
    if (auto it = ctx.eigen.find(name); it != ctx.eigen.end())
      return Term::constant(name, it->second);
    if (ctx.sig.function(name))
      throw SyntaxError("function '" + name + "' used without arguments", e.pos);
    throw UnknownSymbol(name, e.pos);
  }
  if (e.items.empty()) throw SyntaxError("empty term", e.pos);
  if (e.items[0].is_list)
    throw SyntaxError("term head must be a symbol", e.items[0].pos);
  const std::string& head = e.items[0].atom;
  FunctionRef fn = ctx.sig.function(head);
  if (!fn) {
    if (ctx.sig.constant(head))
      throw SyntaxError("constant '" + head + "' applied to arguments", e.pos);
    throw UnknownSymbol(head, e.items[0].pos);
  }
  if (e.items.size() - 1 != fn->args.size())
    throw SyntaxError("'" + head + "' expects " +
                          std::to_string(fn->args.size()) + " arguments, got " +
                          std::to_string(e.items.size() - 1),
                      e.pos);
  std::vector<Term> args;
  for (std::size_t i = 1; i < e.items.size(); ++i)
    args.push_back(expect_sort(e.items[i], ctx, scope, fn->args[i - 1]));
  return Term::apply_unchecked(fn, std::move(args));
}

Formula parse_formula(const SExpr& e, const ParseContext& ctx,
                      std::vector<Term>& scope) {
  if (!e.is_list) {
    if (e.atom == "false") return Formula::falsum();
    Term t = parse_term(e, ctx, scope);
    if (!ctx.sig.is_subsort(t.sort(), sorts::Boolean))
      throw SortError("Boolean", t.sort().name(), e.pos);
    return Formula::atom(t);
  }
  const std::string& head = e.head();
  auto sub = [&](std::size_t i) { return parse_formula(e.items[i], ctx, scope); };

  if (head == "not") {
    arity(e, 2);
    return Formula::negation(sub(1));
  }
  if (head == "and" || head == "or") {
    if (e.items.size() < 3)
      throw SyntaxError("'" + head + "' needs at least two operands", e.pos);
    std::vector<Formula> fs;
    for (std::size_t i = 1; i < e.items.size(); ++i) fs.push_back(sub(i));
    return head == "and" ? Formula::conjunction(std::move(fs))
                         : Formula::disjunction(std::move(fs));
  }
  if (head == "implies") {
    arity(e, 3);
    return Formula::implication(sub(1), sub(2));
  }
  if (head == "forall" || head == "exists") {
    arity(e, 3);
    const SExpr& b = e.items[1];
    if (!b.is_list || b.items.size() != 2 || b.items[0].is_list ||
        b.items[1].is_list)
      throw SyntaxError("binder must look like (name Sort)", b.pos);
    const std::string& name = b.items[0].atom;
    const std::string& sort = b.items[1].atom;
    if (Signature::is_reserved(name))
      throw SyntaxError("'" + name + "' cannot name a variable", b.items[0].pos);
    if (!ctx.sig.has_sort(sort)) throw UnknownSymbol(sort, b.items[1].pos);
    Term var = Term::variable(name, Sort(sort));
    scope.push_back(var);
    Formula body = parse_formula(e.items[2], ctx, scope);
    scope.pop_back();
    return head == "forall" ? Formula::forall(var, body)
                            : Formula::exists(var, body);
  }
  if (head == "O" || head == "O-legal" || head == "O-moral") {
    arity(e, 5);
    Term ag = expect_sort(e.items[1], ctx, scope, sorts::Agent);
    Term t = expect_sort(e.items[2], ctx, scope, sorts::Moment);
    Flavor fl = head == "O"         ? Flavor::Unflagged
                : head == "O-legal" ? Flavor::Legal
                                    : Flavor::Moral;
    return Formula::ought(ag, t, sub(3), sub(4), fl);
  }
  if (auto it = modal_keywords().find(head); it != modal_keywords().end()) {
    FormulaKind k = it->second;
    std::vector<Term> args;
    if (k == FormulaKind::Common) {
      arity(e, 3);
      args.push_back(expect_sort(e.items[1], ctx, scope, sorts::Moment));
    } else if (k == FormulaKind::Says && e.items.size() == 5) {
      args.push_back(expect_sort(e.items[1], ctx, scope, sorts::Agent));
      args.push_back(expect_sort(e.items[2], ctx, scope, sorts::Agent));
      args.push_back(expect_sort(e.items[3], ctx, scope, sorts::Moment));
    } else {
      arity(e, 4);
      args.push_back(expect_sort(e.items[1], ctx, scope, sorts::Agent));
      args.push_back(expect_sort(e.items[2], ctx, scope, sorts::Moment));
    }
    return Formula::modal(k, std::move(args), sub(e.items.size() - 1));
  }
  Term t = parse_term(e, ctx, scope);
  if (!ctx.sig.is_subsort(t.sort(), sorts::Boolean))
    throw SortError("Boolean", t.sort().name(), e.pos);
  return Formula::atom(t);
}

Formula parse_formula(const SExpr& e, const ParseContext& ctx) {
  std::vector<Term> scope;
  return parse_formula(e, ctx, scope);
}

Formula parse_formula(std::string_view text, const Signature& sig) {
  return parse_formula(read_sexpr(text), ParseContext{sig});
}

Term parse_term(std::string_view text, const Signature& sig) {
  return parse_term(read_sexpr(text), ParseContext{sig});
}

std::variant<Formula, Term> parse(std::string_view text, const Signature& sig) {
  SExpr e = read_sexpr(text);
  ParseContext ctx{sig};
  const std::string& head = e.is_list ? e.head() : e.atom;
  static const std::vector<std::string> kFormulaHeads = {
      "not", "and", "or", "implies", "forall", "exists", "O", "O-legal",
      "O-moral", "false"};
  if (std::find(kFormulaHeads.begin(), kFormulaHeads.end(), head) !=
          kFormulaHeads.end() ||
      modal_keywords().count(head))
    return parse_formula(e, ctx);
  Term t = parse_term(e, ctx);
  if (ctx.sig.is_subsort(t.sort(), sorts::Boolean)) return Formula::atom(t);
  return t;
}

}  // namespace tai
