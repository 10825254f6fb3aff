#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tai/formula.hpp"
#include "tai/sexpr.hpp"

namespace tai {

/// Symbol environment for parsing: a signature plus eigenconstants that only
/// exist inside a proof document.
struct ParseContext {
  const Signature& sig;
  std::map<std::string, Sort> eigen = {};
};

Term parse_term(const SExpr& e, const ParseContext& ctx,
                const std::vector<Term>& scope = {});
Formula parse_formula(const SExpr& e, const ParseContext& ctx,
                      std::vector<Term>& scope);
Formula parse_formula(const SExpr& e, const ParseContext& ctx);

Formula parse_formula(std::string_view text, const Signature& sig);
Term parse_term(std::string_view text, const Signature& sig);

/// Parses either a formula or a non-Boolean term. Boolean-sorted
/// applications and all keyword forms come back as formulas.
std::variant<Formula, Term> parse(std::string_view text, const Signature& sig);

}  // namespace tai
