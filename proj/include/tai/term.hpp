#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tai/signature.hpp"

namespace tai {

/// Immutable sorted term: a variable, a constant, or a function application.
///
/// Integer literals are Moment constants. Applications of `next` to an
/// integer literal are folded to the successor literal on construction.
/// Variables whose name starts with '?' are prover metavariables and never
/// appear in parsed input.
class Term {
 public:
  enum class Kind { Variable, Constant, Application };

  Term() = default;

  static Term variable(std::string name, Sort sort);
  static Term constant(std::string name, Sort sort);
  static Term integer(long value);
  /// Checks every argument sort against the profile; throws SortError.
  static Term apply(const Signature& sig, FunctionRef fn, std::vector<Term> args);
  /// Rebuilds an application whose arguments are already known to fit.
  static Term apply_unchecked(FunctionRef fn, std::vector<Term> args);

  bool null() const { return node_ == nullptr; }
  Kind kind() const { return node_->kind; }
  bool is_variable() const { return node_->kind == Kind::Variable; }
  bool is_constant() const { return node_->kind == Kind::Constant; }
  bool is_application() const { return node_->kind == Kind::Application; }
  bool is_meta() const;

  /// Variable/constant name, or the function symbol of an application.
  const std::string& name() const { return node_->name; }
  const Sort& sort() const { return node_->sort; }
  const FunctionRef& function() const { return node_->fn; }
  const std::vector<Term>& args() const { return node_->args; }
  std::optional<long> integer_value() const { return node_->integer; }

  /// No variables (of either kind) occur.
  bool ground() const { return node_->ground; }
  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }

  bool occurs(const Term& var) const;
  bool contains_constant(const std::string& name) const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

  std::string str() const;

 private:
  struct Node {
    Kind kind;
    std::string name;
    Sort sort;
    FunctionRef fn;
    std::vector<Term> args;
    std::optional<long> integer;
    bool ground = true;
    std::size_t hash = 0;
    std::size_t size = 1;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Term make(Node n);

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

std::size_t hash_combine(std::size_t seed, std::size_t v);

}  // namespace tai
