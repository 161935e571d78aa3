#include "vgadt/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace vgadt {

namespace {

enum class Tok { Ident, TyVar, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLoc loc;
};

constexpr std::array<std::string_view, 7> kKeywords = {"base",   "subbase", "private", "closed",
                                                       "type",   "of",      "forall"};

bool is_keyword(std::string_view s) {
  return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end();
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourceLoc loc{line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (c == '\'') {
      std::size_t j = i + 1;
      if (j >= text.size() || !ident_start(text[j]))
        throw ParseError({loc, "expected a type variable name after '"});
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({Tok::TyVar, std::string(text.substr(i + 1, j - i - 1)), loc});
      advance(j - i);
      continue;
    }
    std::string_view rest = text.substr(i);
    std::size_t len = 0;
    if (rest.starts_with("->") || rest.starts_with(">=") || rest.starts_with("<="))
      len = 2;
    else if (std::string_view("()[],|:.=*+-~").find(c) != std::string_view::npos)
      len = 1;
    if (len == 0) throw ParseError({loc, std::string("unexpected character '") + c + "'"});
    out.push_back({Tok::Sym, std::string(rest.substr(0, len)), loc});
    advance(len);
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
  case Tok::Ident: return "'" + t.text + "'";
  case Tok::TyVar: return "type variable '" + t.text;
  case Tok::Sym: return "'" + t.text + "'";
  case Tok::End: return "end of input";
  }
  return "?";
}

struct PendingDecls {
  std::vector<std::pair<std::string, SourceLoc>> bases;
  std::vector<SubbaseEdge> subbase;
  std::vector<PrivateEdge> privates;
  std::vector<ClosedDecl> closed;
  std::vector<DatatypeDecl> datatypes;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_sym(std::string_view s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Sym && peek(ahead).text == s;
  }
  bool is_kw(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }
  bool accept_sym(std::string_view s) {
    if (!is_sym(s)) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(const Token& t, const std::string& what) {
    throw ParseError({t.loc, "expected " + what + ", found " + describe(t)});
  }
  Token expect_sym(std::string_view s) {
    if (!is_sym(s)) fail(peek(), "'" + std::string(s) + "'");
    return next();
  }
  Token expect_kw(std::string_view s) {
    if (!is_kw(s)) fail(peek(), "'" + std::string(s) + "'");
    return next();
  }
  Token expect_ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(peek(), what);
    if (is_keyword(peek().text))
      throw ParseError({peek().loc, "'" + peek().text + "' is a reserved word"});
    return next();
  }
  Token expect_tyvar() {
    if (peek().kind != Tok::TyVar) fail(peek(), "a type variable");
    return next();
  }

  // Skips to the start of the next declaration after an error.
  void recover() {
    next();
    while (!at_end()) {
      if (peek().kind == Tok::Ident &&
          (peek().text == "base" || peek().text == "subbase" || peek().text == "private" ||
           peek().text == "closed" || peek().text == "type"))
        return;
      next();
    }
  }

  // --- types ---

  TypeExpr type() {
    TypeExpr lhs = product();
    if (accept_sym("->")) return TypeExpr::arrow(std::move(lhs), type());
    return lhs;
  }

  TypeExpr product() {
    TypeExpr lhs = postfix();
    if (accept_sym("*")) return TypeExpr::product(std::move(lhs), product());
    return lhs;
  }

  bool at_type_name() const { return peek().kind == Tok::Ident && !is_keyword(peek().text); }

  TypeExpr postfix() {
    std::vector<TypeExpr> args = atom();
    if (args.size() != 1 && !at_type_name()) fail(peek(), "a type constructor after the argument list");
    while (at_type_name()) {
      TypeExpr t = TypeExpr::app(next().text, std::move(args));
      args = {std::move(t)};
    }
    return std::move(args.front());
  }

  // One type, or a parenthesized argument list of two or more.
  std::vector<TypeExpr> atom() {
    const Token& t = peek();
    if (t.kind == Tok::TyVar) return {TypeExpr::var(next().text)};
    if (t.kind == Tok::Ident) return {TypeExpr::app(expect_ident("a type").text)};
    if (accept_sym("(")) {
      std::vector<TypeExpr> items{type()};
      while (accept_sym(",")) items.push_back(type());
      expect_sym(")");
      return items;
    }
    fail(t, "a type");
  }

  // --- declarations ---

  void decl(PendingDecls& out, std::vector<Diagnostic>& diags) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || !is_keyword(t.text) || t.text == "of" || t.text == "forall")
      fail(t, "a declaration");
    Token kw = next();
    if (kw.text == "base") {
      out.bases.emplace_back(expect_ident("a type name").text, kw.loc);
    } else if (kw.text == "subbase") {
      std::string lo = expect_ident("a type name").text;
      expect_sym("<=");
      out.subbase.push_back({lo, expect_ident("a type name").text, kw.loc});
    } else if (kw.text == "private") {
      std::string lo = expect_ident("a type name").text;
      expect_sym("=");
      out.privates.push_back({lo, expect_ident("a type name").text, kw.loc});
    } else if (kw.text == "closed") {
      std::optional<Variance> flag;
      if (peek().kind == Tok::Sym && peek().text.size() == 1) flag = variance_from_char(peek().text[0]);
      if (!flag || *flag == Variance::Irr) fail(peek(), "one of + - =");
      next();
      std::string name;
      if (peek().kind == Tok::Sym && (peek().text == "->" || peek().text == "*"))
        name = next().text;
      else
        name = expect_ident("a type name").text;
      out.closed.push_back({*flag, name, kw.loc});
    } else {
      datatype(kw, out, diags);
    }
  }

  void datatype(const Token& kw, PendingDecls& out, std::vector<Diagnostic>& diags) {
    DatatypeDecl d;
    d.loc = kw.loc;
    if (accept_sym("(")) {
      do {
        std::optional<Variance> v;
        if (peek().kind == Tok::Sym && peek().text.size() == 1) v = variance_from_char(peek().text[0]);
        if (!v) fail(peek(), "a variance (+ - = ~)");
        next();
        d.params.push_back({expect_tyvar().text, *v});
      } while (accept_sym(","));
      expect_sym(")");
    }
    d.name = expect_ident("a type name").text;
    expect_sym("=");
    accept_sym("|");
    do {
      constructor(d, diags);
    } while (accept_sym("|"));
    out.datatypes.push_back(std::move(d));
  }

  void constructor(DatatypeDecl& d, std::vector<Diagnostic>& diags) {
    Token name = expect_ident("a constructor name");
    auto normalize = [&](const auto& raw) {
      try {
        d.ctors.push_back(normalize_constructor(d, raw));
        d.ctors.back().loc = name.loc;
      } catch (const std::invalid_argument& e) {
        diags.push_back({name.loc, e.what()});
      }
    };
    if (is_kw("of")) {
      next();
      DataConstructorDecl k;
      k.name = name.text;
      k.form = ConstructorForm::Adt;
      k.arg = type();
      k.loc = name.loc;
      normalize(k);
      return;
    }
    expect_sym(":");
    if (is_kw("forall")) {
      next();
      CodomainConstructor k;
      k.name = name.text;
      k.loc = name.loc;
      while (peek().kind == Tok::TyVar) k.foralls.push_back(next().text);
      expect_sym(".");
      TypeExpr full = type();
      // Arguments are the arrow spine before the result; several are paired.
      std::vector<TypeExpr> spine;
      while (full.is_app() && full.name == kArrow && full.args.size() == 2) {
        spine.push_back(full.args[0]);
        TypeExpr rest = full.args[1];
        full = std::move(rest);
      }
      k.codomain = std::move(full);
      if (spine.empty()) {
        k.arg = TypeExpr::app(std::string(kUnit));
      } else {
        k.arg = spine.back();
        for (std::size_t i = spine.size() - 1; i-- > 0;) k.arg = TypeExpr::product(spine[i], k.arg);
      }
      normalize(k);
      return;
    }
    DataConstructorDecl k;
    k.name = name.text;
    k.form = ConstructorForm::Constrained;
    k.loc = name.loc;
    while (peek().kind == Tok::TyVar) k.existentials.push_back(next().text);
    expect_sym("[");
    if (!is_sym("]")) {
      do {
        Token v = expect_tyvar();
        auto p = d.param_index(v.text);
        if (!p)
          throw ParseError({v.loc, "'" + v.text + " is not a parameter of '" + d.name + "'"});
        ConstraintRel rel;
        if (accept_sym("="))
          rel = ConstraintRel::Eq;
        else if (accept_sym(">="))
          rel = ConstraintRel::Sup;
        else if (accept_sym("<="))
          rel = ConstraintRel::Sub;
        else
          fail(peek(), "one of = >= <=");
        k.constraints.push_back({*p, rel, type()});
      } while (accept_sym(","));
    }
    expect_sym("]");
    expect_sym(".");
    k.arg = type();
    normalize(k);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace

ParseResult parse_signature(std::string_view text) {
  ParseResult result;
  std::vector<Token> toks;
  try {
    toks = lex(text);
  } catch (const ParseError& e) {
    result.diagnostics.push_back(e.diagnostic());
    return result;
  }
  Parser p(std::move(toks));
  PendingDecls pending;
  while (!p.at_end()) {
    try {
      p.decl(pending, result.diagnostics);
    } catch (const ParseError& e) {
      result.diagnostics.push_back(e.diagnostic());
      p.recover();
    }
  }
  if (!result.diagnostics.empty()) return result;

  // Bases and datatypes first so that private declarations can copy the
  // arity of a type declared anywhere in the file.
  Signature sig;
  for (auto& [name, loc] : pending.bases) sig.add_base(name, loc);
  for (auto& d : pending.datatypes) sig.add_datatype(std::move(d));
  for (auto& e : pending.privates) sig.add_private(e.lower, e.upper, e.loc);
  for (auto& e : pending.subbase) sig.add_subbase(e.lower, e.upper, e.loc);
  for (auto& c : pending.closed) sig.add_closed(c.flag, c.ctor, c.loc);

  result.diagnostics = wf_check(sig);
  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::pair(a.loc.line, a.loc.column) < std::pair(b.loc.line, b.loc.column);
                   });
  if (result.diagnostics.empty()) result.signature = std::move(sig);
  return result;
}

TypeExpr parse_type(std::string_view text) {
  Parser p(lex(text));
  TypeExpr t = p.type();
  if (!p.at_end()) p.fail(p.peek(), "end of input");
  return t;
}

} // namespace vgadt
