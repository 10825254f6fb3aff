#include "tai/knowledge_base.hpp"

#include <algorithm>

#include "tai/errors.hpp"

namespace tai {

std::string Provenance::str() const {
  switch (kind) {
    case ProvenanceKind::Axiom: return "axiom";
    case ProvenanceKind::Contract: return "contract:" + agent;
    case ProvenanceKind::Percept: return "percept";
    case ProvenanceKind::Derived: return "derived";
    case ProvenanceKind::Declared: return "declared";
  }
  return "axiom";
}

KnowledgeBase::KnowledgeBase()
    : sig_(std::make_shared<const Signature>()) {}

KnowledgeBase::KnowledgeBase(Signature sig)
    : sig_(std::make_shared<const Signature>(std::move(sig))) {}

KnowledgeBase::KnowledgeBase(std::shared_ptr<const Signature> sig)
    : sig_(std::move(sig)) {}

bool KnowledgeBase::add(const Formula& f, Provenance p, std::string label) {
  sort_check(*sig_, f);
  if (!f.closed())
    throw SortError("closed formula",
                    "free variable " + f.free_variables().front().name());
  if (contains(f)) return false;
  entries_.push_back(KbEntry{std::move(label), f, std::move(p)});
  return true;
}

bool KnowledgeBase::contains(const Formula& f) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const KbEntry& e) { return e.formula == f; });
}

std::size_t KnowledgeBase::remove(const Formula& f) {
  auto it = std::remove_if(entries_.begin(), entries_.end(),
                           [&](const KbEntry& e) { return e.formula == f; });
  std::size_t n = static_cast<std::size_t>(entries_.end() - it);
  entries_.erase(it, entries_.end());
  return n;
}

std::vector<Formula> KnowledgeBase::formulas() const {
  std::vector<Formula> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.formula);
  return out;
}

const KbEntry* KnowledgeBase::find_label(const std::string& label) const {
  for (const auto& e : entries_)
    if (e.label == label) return &e;
  return nullptr;
}

std::vector<Formula> KnowledgeBase::contract(const std::string& agent) const {
  std::vector<Formula> out;
  for (const auto& e : entries_)
    if (e.provenance.kind == ProvenanceKind::Contract &&
        e.provenance.agent == agent)
      out.push_back(e.formula);
  return out;
}

KnowledgeBase KnowledgeBase::with(std::span<const Formula> extra,
                                  Provenance p) const {
  KnowledgeBase out = *this;
  for (const Formula& f : extra) out.add(f, p);
  return out;
}

std::string KnowledgeBase::to_text() const {
  std::string out = sig_->declarations_text();
  for (const auto& e : entries_) {
    out += "(formula ";
    out += e.label.empty() ? "_" : e.label;
    out += " " + e.provenance.str() + " " + pretty(e.formula) + ")\n";
  }
  return out;
}

}  // namespace tai
