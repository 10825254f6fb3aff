#include "tai/document.hpp"

#include "tai/errors.hpp"
#include "tai/parser.hpp"

namespace tai {

namespace {

const std::string& atom_at(const SExpr& e, std::size_t i, const char* what) {
  if (i >= e.items.size() || e.items[i].is_list)
    throw SyntaxError(std::string("expected ") + what + " in (" + e.head() + " ...)", e.pos);
  return e.items[i].atom;
}

std::vector<Sort> sort_list(const Signature& sig, const SExpr& e) {
  if (!e.is_list) throw SyntaxError("expected a parenthesized sort list", e.pos);
  std::vector<Sort> out;
  for (const SExpr& s : e.items) {
    if (s.is_list) throw SyntaxError("expected a sort name", s.pos);
    if (!sig.has_sort(s.atom)) throw UnknownSymbol(s.atom, s.pos);
    out.emplace_back(s.atom);
  }
  return out;
}

}  // namespace

bool apply_declaration(Signature& sig, const SExpr& e) {
  const std::string& h = e.head();
  try {
    if (h == "sort") {
      if (e.items.size() != 2 && e.items.size() != 3) throw SyntaxError("(sort Name [Parent])", e.pos);
      std::optional<std::string> parent;
      if (e.items.size() == 3) parent = atom_at(e, 2, "parent sort");
      sig.declare_sort(atom_at(e, 1, "sort name"), parent);
      return true;
    }
    if (h == "fun" || h == "pred") {
      std::size_t want = h == "fun" ? 4 : 3;
      if (e.items.size() != want)
        throw SyntaxError(h == "fun" ? "(fun name (Sorts...) Result)" : "(pred name (Sorts...))", e.pos);
      Sort result = sorts::Boolean;
      if (h == "fun") {
        const std::string& r = atom_at(e, 3, "result sort");
        if (!sig.has_sort(r)) throw UnknownSymbol(r, e.items[3].pos);
        result = Sort{r};
      }
      sig.declare_function(atom_at(e, 1, "name"), sort_list(sig, e.items[2]), result);
      return true;
    }
    if (h == "const") {
      if (e.items.size() != 3) throw SyntaxError("(const name Sort)", e.pos);
      const std::string& s = atom_at(e, 2, "sort");
      if (!sig.has_sort(s)) throw UnknownSymbol(s, e.items[2].pos);
      sig.declare_constant(atom_at(e, 1, "name"), Sort{s});
      return true;
    }
    if (h == "moment") {
      if (e.items.size() != 3) throw SyntaxError("(moment name integer)", e.pos);
      const std::string& v = atom_at(e, 2, "integer");
      long k = 0;
      try {
        std::size_t used = 0;
        k = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
      } catch (const std::logic_error&) {
        throw SyntaxError("moment value must be an integer", e.items[2].pos);
      }
      sig.declare_moment_alias(atom_at(e, 1, "name"), k);
      return true;
    }
  } catch (const DeclarationError& d) {
    throw SyntaxError(d.what(), e.pos);
  }
  return false;
}

Provenance parse_provenance(const std::string& s, Position pos) {
  if (s == "axiom") return Provenance::axiom();
  if (s == "percept") return Provenance::percept();
  if (s == "derived") return Provenance::derived();
  if (s == "declared") return Provenance::declared();
  if (s.rfind("contract:", 0) == 0 && s.size() > 9) return Provenance::contract(s.substr(9));
  throw SyntaxError("unknown provenance '" + s + "'", pos);
}

KnowledgeBase load_kb(std::string_view text) {
  auto forms = read_sexprs(text);
  Signature sig;
  for (const SExpr& e : forms) apply_declaration(sig, e);
  KnowledgeBase kb(std::move(sig));
  for (const SExpr& e : forms) {
    const std::string& h = e.head();
    if (h == "sort" || h == "fun" || h == "pred" || h == "const" || h == "moment") continue;
    ParseContext ctx{kb.signature()};
    if (h == "formula") {
      if (e.items.size() != 4) throw SyntaxError("(formula label provenance f)", e.pos);
      std::string label = atom_at(e, 1, "label");
      if (label == "_") label.clear();
      kb.add(parse_formula(e.items[3], ctx), parse_provenance(atom_at(e, 2, "provenance"), e.items[2].pos),
             label);
    } else {
      kb.add(parse_formula(e, ctx));
    }
  }
  return kb;
}

}  // namespace tai
