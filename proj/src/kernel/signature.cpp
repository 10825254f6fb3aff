#include "tai/signature.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "tai/errors.hpp"

namespace tai {

namespace {

constexpr std::array kKeywords = {
    "not", "and", "or", "implies", "forall", "exists", "false", "P", "K",
    "B",   "C",   "S",  "D",       "I",      "O",      "O-legal", "O-moral"};

bool is_integer_literal(const std::string& s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

Signature::Signature() {
  using namespace sorts;
  for (const Sort& s : {Agent, ActionType, Event, Moment, Fluent, Boolean, Plan,
                        AgentList})
    sorts_[s.name()] = std::nullopt;
  sorts_[Action.name()] = Event.name();

  auto builtin = [this](const char* name, std::vector<Sort> args, Sort result) {
    add_function(FunctionDecl{name, std::move(args), std::move(result), true});
  };
  builtin(sym::action, {Agent, ActionType}, Action);
  builtin(sym::initially, {Fluent}, Boolean);
  builtin(sym::holds, {Fluent, Moment}, Boolean);
  builtin(sym::happens, {Event, Moment}, Boolean);
  builtin(sym::clipped, {Moment, Fluent, Moment}, Boolean);
  builtin(sym::initiates, {Event, Fluent, Moment}, Boolean);
  builtin(sym::terminates, {Event, Fluent, Moment}, Boolean);
  builtin(sym::prior, {Moment, Moment}, Boolean);
  builtin(sym::can, {Agent, ActionType, Moment}, Boolean);
  builtin(sym::next, {Moment}, Moment);
  builtin(sym::plan, {Plan, AgentList}, Boolean);
  builtin(sym::executed, {Plan}, Boolean);
  builtin(sym::within, {Plan, Moment}, Boolean);
  builtin(sym::plan_empty, {Moment}, Plan);
  builtin(sym::plan_then, {Plan, Agent, ActionType, Moment}, Plan);
  builtin(sym::agents_cons, {Agent, AgentList}, AgentList);
  constants_[sym::agents_nil] = AgentList;
}

bool Signature::is_reserved(const std::string& name) {
  return std::find(kKeywords.begin(), kKeywords.end(), name) !=
             kKeywords.end() ||
         is_integer_literal(name) || name.empty() || name[0] == '?' ||
         name[0] == '_';
}

bool Signature::is_declared(const std::string& name) const {
  return sorts_.count(name) > 0 || functions_.count(name) > 0 ||
         constants_.count(name) > 0 || aliases_.count(name) > 0;
}

void Signature::declare_sort(const std::string& name,
                             std::optional<std::string> parent) {
  if (is_reserved(name) || is_declared(name))
    throw DeclarationError("cannot declare sort '" + name +
                           "': name already in use");
  if (parent && !has_sort(*parent))
    throw UnknownSymbol(*parent);
  // A fresh name can only be a leaf, so the sort graph stays a forest.
  sorts_[name] = parent;
  user_sorts_.push_back(name);
}

FunctionRef Signature::add_function(FunctionDecl decl) {
  auto ref = std::make_shared<const FunctionDecl>(std::move(decl));
  functions_[ref->name] = ref;
  return ref;
}

FunctionRef Signature::declare_function(const std::string& name,
                                        std::vector<Sort> args, Sort result) {
  if (is_reserved(name) || is_declared(name))
    throw DeclarationError("cannot declare function '" + name +
                           "': name already in use");
  for (const Sort& s : args)
    if (!has_sort(s.name())) throw UnknownSymbol(s.name());
  if (!has_sort(result.name())) throw UnknownSymbol(result.name());
  if (args.empty()) {
    declare_constant(name, result);
    return nullptr;
  }
  auto ref = add_function(FunctionDecl{name, std::move(args), result, false});
  user_fns_.push_back(ref);
  return ref;
}

void Signature::declare_constant(const std::string& name, Sort sort) {
  if (is_reserved(name) || is_declared(name))
    throw DeclarationError("cannot declare constant '" + name +
                           "': name already in use");
  if (!has_sort(sort.name())) throw UnknownSymbol(sort.name());
  constants_[name] = sort;
  user_consts_.emplace_back(name, sort);
}

void Signature::declare_moment_alias(const std::string& name, long value) {
  if (is_reserved(name) || is_declared(name) || aliases_.count(name))
    throw DeclarationError("cannot declare moment '" + name +
                           "': name already in use");
  if (value < 0) throw DeclarationError("moments are non-negative integers");
  aliases_[name] = value;
  alias_order_.push_back(name);
}

std::optional<long> Signature::moment_alias(const std::string& name) const {
  auto it = aliases_.find(name);
  if (it == aliases_.end()) return std::nullopt;
  return it->second;
}

bool Signature::has_sort(const std::string& name) const {
  return sorts_.count(name) > 0;
}

std::optional<Sort> Signature::parent(const Sort& s) const {
  auto it = sorts_.find(s.name());
  if (it == sorts_.end() || !it->second) return std::nullopt;
  return Sort(*it->second);
}

bool Signature::is_subsort(const Sort& sub, const Sort& super) const {
  std::optional<Sort> cur = sub;
  while (cur) {
    if (*cur == super) return true;
    cur = parent(*cur);
  }
  return false;
}

FunctionRef Signature::function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : it->second;
}

std::optional<Sort> Signature::constant(const std::string& name) const {
  if (is_integer_literal(name)) return sorts::Moment;
  auto it = constants_.find(name);
  if (it == constants_.end()) return std::nullopt;
  return it->second;
}

std::string Signature::declarations_text() const {
  std::string out;
  for (const auto& s : user_sorts_) {
    out += "(sort " + s;
    if (auto p = sorts_.at(s)) out += " " + *p;
    out += ")\n";
  }
  for (const auto& f : user_fns_) {
    out += "(fun " + f->name + " (";
    for (size_t i = 0; i < f->args.size(); ++i)
      out += (i ? " " : "") + f->args[i].name();
    out += ") " + f->result.name() + ")\n";
  }
  for (const auto& [name, sort] : user_consts_)
    out += "(const " + name + " " + sort.name() + ")\n";
  for (const auto& name : alias_order_)
    out += "(moment " + name + " " + std::to_string(aliases_.at(name)) + ")\n";
  return out;
}

}  // namespace tai
