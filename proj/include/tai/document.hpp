#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tai/knowledge_base.hpp"
#include "tai/sexpr.hpp"

namespace tai {

/// Applies one of (sort N [Parent]), (fun f (S...) R), (pred p (S...)),
/// (const c S), (moment name k). Returns false for any other form.
bool apply_declaration(Signature& sig, const SExpr& e);

/// "axiom", "contract:<agent>", "percept", "derived", "declared".
Provenance parse_provenance(const std::string& s, Position pos = {});

/// Declarations, (formula label provenance f) records and bare formulas, as
/// written by KnowledgeBase::to_text. Throws on the first bad form.
KnowledgeBase load_kb(std::string_view text);

}  // namespace tai
