#include <cctype>

#include "tsim/lang.hpp"

namespace tsim::lang {

std::string LangDiagnostic::str() const {
  return std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + kind + " error: " + message;
}

std::vector<Token> lex(const std::string &text, std::vector<LangDiagnostic> &diags) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto at = [&](size_t k) { return i + k < text.size() ? text[i + k] : '\0'; };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && at(1) == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && at(1) == '*') {
      SrcLoc start{line, col};
      advance(2);
      while (i < text.size() && !(text[i] == '*' && at(1) == '/')) advance(1);
      if (i >= text.size()) {
        diags.push_back({"lexical", start, "unterminated comment"});
        break;
      }
      advance(2);
      continue;
    }
    Token t;
    t.loc = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = text.substr(i, j - i);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Tok::Int;
      t.text = text.substr(i, j - i);
      if (t.text.size() > 12) {
        diags.push_back({"lexical", t.loc, "integer literal too large"});
        t.value = 0;
      } else {
        t.value = std::stoll(t.text);
      }
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (c == '"') {
      size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"') {
        diags.push_back({"lexical", t.loc, "unterminated string"});
        advance(j - i);
        continue;
      }
      t.kind = Tok::Str;
      t.text = text.substr(i + 1, j - i - 1);
      advance(j - i + 1);
      out.push_back(t);
      continue;
    }
    if (c == '#') {
      if (at(1) == 'P' && at(2) == 'S') {
        t.kind = Tok::PS;
        t.text = "#PS";
        advance(3);
        out.push_back(t);
      } else {
        diags.push_back({"lexical", t.loc, "expected #PS"});
        advance(1);
      }
      continue;
    }
    struct Sym {
      const char *s;
      Tok k;
    };
    static const Sym syms[] = {{"..", Tok::DotDot}, {"->", Tok::Arrow}, {"&&", Tok::And}, {"||", Tok::Or},
                               {"<=", Tok::Le},     {">=", Tok::Ge},    {"==", Tok::Eq},  {";", Tok::Semi},
                               {",", Tok::Comma},   {"{", Tok::LBrace}, {"}", Tok::RBrace}, {"(", Tok::LParen},
                               {")", Tok::RParen},  {"@", Tok::At},     {"|", Tok::Bar},  {":", Tok::Colon},
                               {"!", Tok::Bang},    {"?", Tok::Quest},  {"<", Tok::Lt},   {">", Tok::Gt},
                               {"=", Tok::Assign},  {"+", Tok::Plus},   {"-", Tok::Minus}};
    bool matched = false;
    for (const auto &s : syms) {
      size_t n = std::char_traits<char>::length(s.s);
      if (text.compare(i, n, s.s) == 0) {
        t.kind = s.k;
        t.text = s.s;
        advance(n);
        out.push_back(t);
        matched = true;
        break;
      }
    }
    if (!matched) {
      diags.push_back({"lexical", t.loc, std::string("unexpected character '") + c + "'"});
      advance(1);
    }
  }
  Token end;
  end.kind = Tok::End;
  end.loc = {line, col};
  out.push_back(end);
  return out;
}

}  // namespace tsim::lang
