#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tai/formula.hpp"

namespace tai {

enum class ProvenanceKind { Axiom, Contract, Percept, Derived, Declared };

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::Axiom;
  std::string agent;  // owner of a contract clause

  static Provenance axiom() { return {}; }
  static Provenance contract(std::string agent) {
    return {ProvenanceKind::Contract, std::move(agent)};
  }
  static Provenance percept() { return {ProvenanceKind::Percept, {}}; }
  static Provenance derived() { return {ProvenanceKind::Derived, {}}; }
  static Provenance declared() { return {ProvenanceKind::Declared, {}}; }

  std::string str() const;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct KbEntry {
  std::string label;
  Formula formula;
  Provenance provenance;
};

/// A finite set of closed, well-sorted formulas over a signature (Γ).
///
/// Insertion order is preserved and drives every deterministic iteration in
/// the prover and planner. Adding an alpha-equivalent duplicate is a no-op.
class KnowledgeBase {
 public:
  KnowledgeBase();
  explicit KnowledgeBase(Signature sig);
  explicit KnowledgeBase(std::shared_ptr<const Signature> sig);

  const Signature& signature() const { return *sig_; }
  const std::shared_ptr<const Signature>& signature_ptr() const { return sig_; }

  /// Sort-checks and requires a closed formula. Returns false on duplicates.
  bool add(const Formula& f, Provenance p = Provenance::axiom(),
           std::string label = {});
  bool contains(const Formula& f) const;
  /// Removes every entry alpha-equivalent to f; returns how many were removed.
  std::size_t remove(const Formula& f);

  const std::vector<KbEntry>& entries() const { return entries_; }
  std::vector<Formula> formulas() const;
  std::size_t size() const { return entries_.size(); }
  const KbEntry* find_label(const std::string& label) const;

  /// Clauses with provenance contract(agent): the agent's c(a, t).
  std::vector<Formula> contract(const std::string& agent) const;

  /// Copy extended with extra formulas under one provenance.
  KnowledgeBase with(std::span<const Formula> extra,
                     Provenance p = Provenance::derived()) const;

  /// Scenario-syntax document that reloads to an equal knowledge base.
  std::string to_text() const;

 private:
  std::shared_ptr<const Signature> sig_;
  std::vector<KbEntry> entries_;
};

}  // namespace tai
