#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tai/term.hpp"

namespace tai {

enum class FormulaKind {
  Atom,
  False,
  Not,
  And,
  Or,
  Implies,
  ForAll,
  Exists,
  Perceives,
  Knows,
  Common,
  Says,
  Believes,
  Desires,
  Intends,
  Ought,
};

/// Obligation flavor; legal and moral oughts share every inference schema.
enum class Flavor { Unflagged, Legal, Moral };

const char* to_string(Flavor f);

/// Immutable DCEC formula.
///
/// Modal operators keep their term arguments in source order: [agent, time]
/// for P/K/B/D/I/O, [time] for C, [speaker, time] or [speaker, audience, time]
/// for S. Equality is alpha-equivalence.
class Formula {
 public:
  Formula() = default;

  static Formula atom(Term t);
  static Formula falsum();
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> fs);
  static Formula disjunction(std::vector<Formula> fs);
  static Formula implication(Formula antecedent, Formula consequent);
  static Formula forall(Term var, Formula body);
  static Formula exists(Term var, Formula body);
  /// P, K, B, C, S, D, I.
  static Formula modal(FormulaKind kind, std::vector<Term> args, Formula body);
  static Formula ought(Term agent, Term time, Formula condition, Formula action,
                       Flavor flavor = Flavor::Unflagged);

  bool null() const { return node_ == nullptr; }
  FormulaKind kind() const { return node_->kind; }
  bool is(FormulaKind k) const { return node_ && node_->kind == k; }
  bool is_quantifier() const {
    return is(FormulaKind::ForAll) || is(FormulaKind::Exists);
  }
  bool is_modal() const;

  const Term& atom_term() const { return node_->atom; }
  const std::vector<Formula>& subs() const { return node_->subs; }
  const std::vector<Term>& args() const { return node_->args; }
  const Term& var() const { return node_->var; }
  Flavor flavor() const { return node_->flavor; }

  /// Single child of Not, quantifiers and modal operators (action for Ought).
  const Formula& body() const { return node_->subs.back(); }
  const Formula& lhs() const { return node_->subs.front(); }
  const Formula& rhs() const { return node_->subs.back(); }
  const Formula& condition() const { return node_->subs.front(); }

  const Term& agent() const { return node_->args.front(); }
  const Term& time() const { return node_->args.back(); }
  /// Addressee of a binary S; nullopt for the broadcast form.
  std::optional<Term> audience() const;

  std::size_t hash() const { return node_->hash; }
  /// Node count including terms.
  std::size_t size() const { return node_->size; }
  bool closed() const { return node_->free_vars.empty(); }
  const std::vector<Term>& free_variables() const { return node_->free_vars; }
  bool has_metavariables() const { return node_->has_meta; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    FormulaKind kind;
    Term atom;
    std::vector<Formula> subs;
    std::vector<Term> args;
    Term var;
    Flavor flavor = Flavor::Unflagged;
    std::vector<Term> free_vars;
    bool has_meta = false;
    std::size_t hash = 0;
    std::size_t size = 1;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Node n);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Variable name -> replacement term.
using Substitution = std::map<std::string, Term>;

Term substitute(const Term& t, const Substitution& s);
/// Capture-avoiding substitution of free variables. Does not check sorts.
Formula substitute(const Formula& f, const Substitution& s);
/// Sort-checked substitution: every term must sit below its variable's sort.
Formula substitute(const Signature& sig, const Formula& f,
                   const std::vector<std::pair<Term, Term>>& binding);
/// Body of a quantifier with its variable replaced by `t`.
Formula instantiate(const Formula& quantified, const Term& t);

bool formula_contains_constant(const Formula& f, const std::string& name);
void collect_ground_terms(const Formula& f, std::vector<Term>& out);

/// Throws SortError/UnknownSymbol when `f` is not well-sorted over `sig`.
void sort_check(const Signature& sig, const Formula& f);

/// Scenario-syntax rendering; parse(pretty(f)) is alpha-equivalent to f.
std::string pretty(const Formula& f);
std::string pretty(const Term& t);

/// Convenience constructors for built-in atoms.
Formula holds(const Signature& sig, const Term& fluent, const Term& t);
Formula happens(const Signature& sig, const Term& event, const Term& t);
Term action(const Signature& sig, const Term& agent, const Term& type);
Formula can(const Signature& sig, const Term& agent, const Term& type,
            const Term& t);
Formula prior(const Signature& sig, const Term& a, const Term& b);

}  // namespace tai
