#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tai/errors.hpp"

namespace tai {

/// Minimal S-expression: an atom or a parenthesized list. `;` starts a comment.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  Position pos;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  /// Head symbol of a non-empty list whose first item is an atom, else "".
  const std::string& head() const;
  std::string str() const;
};

/// Reads every top-level expression. Throws SyntaxError.
std::vector<SExpr> read_sexprs(std::string_view text);
/// Reads exactly one expression.
SExpr read_sexpr(std::string_view text);

}  // namespace tai
