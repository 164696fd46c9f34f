#include <set>

#include "tsim/lang.hpp"

namespace tsim::lang {

namespace {

struct SyntaxError {
  LangDiagnostic diag;
};

// Keywords are contextual; only the boolean literals are reserved.
const std::set<std::string> kKeywords = {"true", "false"};

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  RequirementFile file() {
    RequirementFile f;
    bool lists = false;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::PS && peek(1).kind == Tok::Assign) {
        next();
        next();
        if (f.ps) fail(peek(), "#PS defined twice");
        f.ps = expect(Tok::Int, "integer").value;
        expect(Tok::Semi, "';'");
      } else if (is_kw("process")) {
        f.processes.push_back(process());
      } else if (is_kw("assume")) {
        f.assumes.push_back(assume(std::nullopt, peek().loc));
      } else {
        SrcLoc at = peek().loc;
        IntExpr e = expr();
        if (is_kw("assume")) {
          f.assumes.push_back(assume(e, at));
          continue;
        }
        if (lists) fail_at(at, "index lists given twice");
        lists = true;
        f.model_indices.push_back(e);
        while (accept(Tok::Comma)) f.model_indices.push_back(expr());
        expect(Tok::Semi, "';' after the model index list");
        f.spec_indices.push_back(expr());
        while (accept(Tok::Comma)) f.spec_indices.push_back(expr());
        expect(Tok::Semi, "';' after the model and spec indices");
      }
    }
    return f;
  }

private:
  const Token &peek(size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
  const Token &next() { return t_[std::min(p_++, t_.size() - 1)]; }
  bool is_kw(const char *kw) const { return peek().kind == Tok::Ident && peek().text == kw; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  [[noreturn]] void fail_at(SrcLoc at, const std::string &msg) { throw SyntaxError{{"syntax", at, msg}}; }
  [[noreturn]] void fail(const Token &tok, const std::string &msg) {
    std::string got = tok.kind == Tok::End ? "end of input" : "'" + tok.text + "'";
    fail_at(tok.loc, msg + ", got " + got);
  }
  const Token &expect(Tok k, const std::string &what) {
    if (peek().kind != k) fail(peek(), "expected " + what);
    return next();
  }
  void expect_kw(const char *kw) {
    if (!is_kw(kw)) fail(peek(), std::string("expected '") + kw + "'");
    next();
  }
  std::string ident(const std::string &what) {
    const Token &tok = peek();
    if (tok.kind != Tok::Ident || kKeywords.count(tok.text)) fail(tok, "expected " + what);
    return next().text;
  }

  IntExpr expr() {
    IntExpr e = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool add = next().kind == Tok::Plus;
      IntExpr r = term();
      IntExpr n;
      n.kind = add ? IntExpr::Kind::Add : IntExpr::Kind::Sub;
      n.args = {std::move(e), std::move(r)};
      e = std::move(n);
    }
    return e;
  }
  IntExpr term() {
    IntExpr e;
    const Token &tok = peek();
    switch (tok.kind) {
      case Tok::Int:
        e.kind = IntExpr::Kind::Lit;
        e.value = next().value;
        return e;
      case Tok::PS:
        next();
        e.kind = IntExpr::Kind::PS;
        return e;
      case Tok::Ident:
        e.kind = IntExpr::Kind::Var;
        e.var = ident("index variable");
        return e;
      case Tok::LParen: {
        next();
        IntExpr inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Minus:
        next();
        e.kind = IntExpr::Kind::Neg;
        e.args = {term()};
        return e;
      default: fail(tok, "expected integer expression");
    }
  }

  Quant quant() {
    Quant q;
    q.loc = expect(Tok::Bar, "'|'").loc;
    q.var = ident("binder");
    expect(Tok::Colon, "':'");
    q.lo = expr();
    expect(Tok::DotDot, "'..'");
    q.hi = expr();
    return q;
  }

  PredAst pred() {
    PredAst a = conj();
    if (peek().kind != Tok::Or) return a;
    PredAst n;
    n.kind = PredAst::Kind::Or;
    n.loc = a.loc;
    n.args.push_back(std::move(a));
    while (accept(Tok::Or)) n.args.push_back(conj());
    return n;
  }
  PredAst conj() {
    PredAst a = unary();
    if (peek().kind != Tok::And) return a;
    PredAst n;
    n.kind = PredAst::Kind::And;
    n.loc = a.loc;
    n.args.push_back(std::move(a));
    while (accept(Tok::And)) n.args.push_back(unary());
    return n;
  }
  PredAst unary() {
    PredAst n;
    n.loc = peek().loc;
    if (accept(Tok::Bang)) {
      n.kind = PredAst::Kind::Not;
      n.args.push_back(unary());
      return n;
    }
    if (accept(Tok::LParen)) {
      PredAst inner = pred();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (is_kw("true") || is_kw("false")) {
      n.kind = next().text == "true" ? PredAst::Kind::True : PredAst::Kind::False;
      return n;
    }
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) fail(peek(), "expected predicate");
    n.kind = PredAst::Kind::Ref;
    n.name = next().text;
    if (accept(Tok::At)) {
      expect(Tok::LParen, "'('");
      n.proc = expr();
      expect(Tok::RParen, "')'");
    }
    static const std::pair<Tok, Cmp> ops[] = {
        {Tok::Lt, Cmp::LT}, {Tok::Le, Cmp::LE}, {Tok::Eq, Cmp::EQ}, {Tok::Ge, Cmp::GE}, {Tok::Gt, Cmp::GT}};
    for (const auto &[tk, cmp] : ops)
      if (peek().kind == tk) {
        next();
        n.kind = PredAst::Kind::Clock;
        n.cmp = cmp;
        n.value = expect(Tok::Int, "clock constant").value;
        break;
      }
    return n;
  }

  FairItem fair_item() {
    FairItem it;
    it.loc = peek().loc;
    if (is_kw("strong"))
      it.strong = true;
    else if (is_kw("weak"))
      it.strong = false;
    else
      fail(peek(), "expected 'strong' or 'weak'");
    next();
    if (!is_kw("event")) it.pre = pred();
    if (is_kw("event")) {
      next();
      it.is_event = true;
      expect(Tok::LBrace, "'{'");
      if (accept(Tok::Bang))
        it.dir = Dir::Send;
      else if (accept(Tok::Quest))
        it.dir = Dir::Recv;
      it.event = ident("event name");
      if (accept(Tok::At)) {
        expect(Tok::LParen, "'('");
        it.tag = expr();
        expect(Tok::RParen, "')'");
      }
      expect(Tok::RBrace, "'}'");
      if (peek().kind != Tok::Semi) it.post = pred();
    }
    expect(Tok::Semi, "';'");
    return it;
  }

  AssumeBlock assume(std::optional<IntExpr> owner, SrcLoc at) {
    AssumeBlock b;
    b.owner = std::move(owner);
    b.loc = at;
    expect_kw("assume");
    expect(Tok::LBrace, "'{'");
    while (peek().kind != Tok::RBrace) {
      if (peek().kind == Tok::Bar) {
        if (b.quant) fail(peek(), "one quantifier per assume block");
        b.quant = quant();
        b.quant_from = b.items.size();
        expect(Tok::Comma, "','");
        continue;
      }
      b.items.push_back(fair_item());
    }
    next();
    accept(Tok::Semi);
    return b;
  }

  ProcessDecl process() {
    ProcessDecl p;
    p.loc = peek().loc;
    expect_kw("process");
    if (peek().kind == Tok::Bar)
      p.range = quant();
    else
      p.index = expr();
    if (peek().kind == Tok::Str) p.name = next().text;
    expect(Tok::LBrace, "'{'");
    while (!accept(Tok::RBrace)) {
      if (is_kw("clock")) {
        next();
        p.clocks.push_back(ident("clock name"));
        while (accept(Tok::Comma)) p.clocks.push_back(ident("clock name"));
        expect(Tok::Semi, "';'");
      } else if (is_kw("location")) {
        next();
        LocDecl l;
        l.name = ident("location name");
        if (is_kw("inv")) {
          next();
          l.inv = pred();
        }
        expect(Tok::Semi, "';'");
        p.locations.push_back(std::move(l));
      } else if (is_kw("initial")) {
        next();
        if (p.initial) fail(peek(), "initial condition given twice");
        p.initial = pred();
        expect(Tok::Semi, "';'");
      } else if (is_kw("trans")) {
        TransDecl t;
        t.loc = next().loc;
        t.source = ident("source location");
        expect(Tok::Arrow, "'->'");
        t.target = ident("target location");
        if (is_kw("when")) {
          next();
          t.guard = pred();
        }
        if (is_kw("sync")) {
          next();
          if (accept(Tok::Bang))
            t.dir = Dir::Send;
          else if (accept(Tok::Quest))
            t.dir = Dir::Recv;
          else
            fail(peek(), "expected '!' or '?'");
          t.event = ident("event name");
        }
        if (is_kw("reset")) {
          next();
          t.resets.push_back(ident("clock name"));
          while (accept(Tok::Comma)) t.resets.push_back(ident("clock name"));
        }
        expect(Tok::Semi, "';'");
        p.transitions.push_back(std::move(t));
      } else {
        fail(peek(), "expected clock, location, initial or trans");
      }
    }
    accept(Tok::Semi);
    return p;
  }

  std::vector<Token> t_;
  size_t p_ = 0;
};

}  // namespace

ParseResult parse(const std::string &text) {
  ParseResult r;
  auto toks = lex(text, r.diags);
  if (!r.diags.empty()) return r;
  try {
    Parser p(std::move(toks));
    r.file = p.file();
  } catch (const SyntaxError &e) {
    r.diags.push_back(e.diag);
  }
  return r;
}

}  // namespace tsim::lang
