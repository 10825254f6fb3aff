#include "tai/term.hpp"

#include <functional>

#include "tai/errors.hpp"

namespace tai {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

Term Term::make(Node n) {
  std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
  switch (n.kind) {
    case Kind::Variable:
      // Names are left out so alpha-equivalent formulas hash alike.
      h = hash_combine(h, std::hash<std::string>{}(n.sort.name()));
      n.ground = false;
      break;
    case Kind::Constant:
      h = hash_combine(h, std::hash<std::string>{}(n.name));
      break;
    case Kind::Application:
      h = hash_combine(h, std::hash<std::string>{}(n.name));
      for (const Term& a : n.args) {
        h = hash_combine(h, a.hash());
        n.ground = n.ground && a.ground();
        n.size += a.size();
      }
      break;
  }
  n.hash = h;
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::variable(std::string name, Sort sort) {
  return make(Node{Kind::Variable, std::move(name), std::move(sort), nullptr, {},
                   std::nullopt});
}

Term Term::constant(std::string name, Sort sort) {
  std::optional<long> value;
  if (sort == sorts::Moment && !name.empty() &&
      name.find_first_not_of("0123456789") == std::string::npos)
    value = std::stol(name);
  return make(
      Node{Kind::Constant, std::move(name), std::move(sort), nullptr, {}, value});
}

Term Term::integer(long value) {
  return constant(std::to_string(value), sorts::Moment);
}

Term Term::apply(const Signature& sig, FunctionRef fn, std::vector<Term> args) {
  if (args.size() != fn->args.size())
    throw SortError(std::to_string(fn->args.size()) + " arguments to " + fn->name,
                    std::to_string(args.size()));
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!sig.is_subsort(args[i].sort(), fn->args[i]))
      throw SortError(fn->args[i].name(), args[i].sort().name());
  return apply_unchecked(std::move(fn), std::move(args));
}

Term Term::apply_unchecked(FunctionRef fn, std::vector<Term> args) {
  if (fn->name == sym::next && args.size() == 1 && args[0].integer_value())
    return integer(*args[0].integer_value() + 1);
  std::string name = fn->name;
  Sort result = fn->result;
  return make(Node{Kind::Application, std::move(name), std::move(result),
                   std::move(fn), std::move(args), std::nullopt});
}

bool Term::is_meta() const {
  return node_->kind == Kind::Variable && !node_->name.empty() &&
         node_->name[0] == '?';
}

bool Term::occurs(const Term& var) const {
  if (ground()) return false;
  if (is_variable()) return name() == var.name();
  for (const Term& a : args())
    if (a.occurs(var)) return true;
  return false;
}

bool Term::contains_constant(const std::string& c) const {
  if (is_constant()) return name() == c;
  for (const Term& a : args())
    if (a.contains_constant(c)) return true;
  return false;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.name() != b.name())
    return false;
  if (a.kind() != Term::Kind::Application) return a.sort() == b.sort();
  const auto& xs = a.args();
  const auto& ys = b.args();
  if (xs.size() != ys.size()) return false;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!(xs[i] == ys[i])) return false;
  return true;
}

std::string Term::str() const {
  if (!node_) return "<null>";
  if (!is_application()) return name();
  std::string out = "(" + name();
  for (const Term& a : args()) out += " " + a.str();
  return out + ")";
}

}  // namespace tai
