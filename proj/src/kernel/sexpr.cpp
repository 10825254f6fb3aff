#include "tai/sexpr.hpp"

#include <cctype>

namespace tai {

const std::string& SExpr::head() const {
  static const std::string kEmpty;
  if (!is_list || items.empty() || items[0].is_list) return kEmpty;
  return items[0].atom;
}

std::string SExpr::str() const {
  if (!is_list) return atom;
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i)
    out += (i ? " " : "") + items[i].str();
  return out + ")";
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip();
    return i_ >= text_.size();
  }

  SExpr read() {
    skip();
    if (i_ >= text_.size()) throw SyntaxError("unexpected end of input", here());
    SExpr e;
    e.pos = here();
    char c = text_[i_];
    if (c == ')') throw SyntaxError("unexpected ')'", here());
    if (c == '(') {
      e.is_list = true;
      advance();
      for (;;) {
        skip();
        if (i_ >= text_.size())
          throw SyntaxError("unterminated list opened here", e.pos);
        if (text_[i_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    while (i_ < text_.size()) {
      c = text_[i_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
          c == ';')
        break;
      e.atom += c;
      advance();
    }
    return e;
  }

 private:
  Position here() const { return {line_, col_}; }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(text_[i_]) & 0xC0) != 0x80) {
      ++col_;  // count UTF-8 code points, not bytes
    }
    ++i_;
  }

  void skip() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == ';') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) {
  Reader r(text);
  std::vector<SExpr> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

SExpr read_sexpr(std::string_view text) {
  Reader r(text);
  SExpr e = r.read();
  if (!r.at_end()) throw SyntaxError("trailing input after expression", e.pos);
  return e;
}

}  // namespace tai
