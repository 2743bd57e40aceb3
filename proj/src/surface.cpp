#include "pcwf/surface.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "pcwf/error.hpp"
#include "pcwf/io.hpp"

namespace pcwf::surface {
namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  kIdent, kKeyword, kNat, kString, kLParen, kRParen, kLBrace, kRBrace,
  kComma, kColon, kEquals, kBackslash, kDot, kProj1, kProj2, kHash, kEnd
};

const std::set<std::string> kKeywords = {"ctx", "type", "term", "in", "Pi", "Sigma",
                                         "load", "empty", "yoneda", "eval", "check"};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  std::size_t value = 0;
  Pos pos;
};

[[noreturn]] void fail(const Pos& pos, const std::string& message) {
  throw InputError(message, pos.line, pos.col);
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd: return "end of input";
    case Tok::kString: return "string \"" + t.text + "\"";
    case Tok::kNat: return "number " + t.text;
    default: return "'" + t.text + "'";
  }
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (true) {
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) {
        advance();
      } else if (text.compare(i, 2, "--") == 0) {
        while (i < text.size() && text[i] != '\n') advance();
      } else {
        break;
      }
    }
    Token t;
    t.pos = {line, col};
    if (i >= text.size()) {
      out.push_back(t);
      return out;
    }
    char c = text[i];
    if (ident_start(c)) {
      while (i < text.size() && ident_char(text[i])) {
        t.text += text[i];
        advance();
      }
      t.kind = kKeywords.contains(t.text) ? Tok::kKeyword : Tok::kIdent;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        t.text += text[i];
        advance();
      }
      if (t.text.size() > 9) fail(t.pos, "number too large: " + t.text);
      t.kind = Tok::kNat;
      t.value = std::stoul(t.text);
    } else if (c == '"') {
      advance();
      while (true) {
        if (i >= text.size() || text[i] == '\n') fail(t.pos, "unterminated string");
        if (text[i] == '"') break;
        if (text[i] == '\\') {
          advance();
          if (i >= text.size()) fail(t.pos, "unterminated string");
        }
        t.text += text[i];
        advance();
      }
      advance();
      t.kind = Tok::kString;
    } else if (c == '.' && i + 1 < text.size() && (text[i + 1] == '1' || text[i + 1] == '2')) {
      t.kind = text[i + 1] == '1' ? Tok::kProj1 : Tok::kProj2;
      t.text = text.substr(i, 2);
      advance();
      advance();
    } else {
      static const std::string singles = "(){},:=\\.#";
      static const Tok kinds[] = {Tok::kLParen, Tok::kRParen, Tok::kLBrace, Tok::kRBrace, Tok::kComma,
                                  Tok::kColon,  Tok::kEquals, Tok::kBackslash, Tok::kDot, Tok::kHash};
      auto k = singles.find(c);
      if (k == std::string::npos) fail(t.pos, std::string("unexpected character '") + c + "'");
      t.kind = kinds[k];
      t.text = std::string(1, c);
      advance();
    }
    out.push_back(std::move(t));
  }
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Script script() {
    Script s;
    std::set<std::string> names;
    while (peek().kind != Tok::kEnd) {
      Decl d = decl();
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (!std::is_same_v<T, Command>) {
              if (!names.insert(x.name).second) fail(x.pos, "duplicate name '" + x.name + "'");
            }
          },
          d);
      s.decls.push_back(std::move(d));
    }
    return s;
  }

  TermPtr whole_term() {
    auto t = term();
    expect(Tok::kEnd, "end of input");
    return t;
  }

  TypePtr whole_type() {
    auto t = type();
    expect(Tok::kEnd, "end of input");
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool at_keyword(const char* k) const { return peek().kind == Tok::kKeyword && peek().text == k; }

  [[noreturn]] void unexpected(const std::string& wanted) const {
    fail(peek().pos, "expected " + wanted + ", found " + describe(peek()));
  }

  Token expect(Tok kind, const std::string& wanted) {
    if (peek().kind != kind) unexpected(wanted);
    return next();
  }

  void keyword(const char* k) {
    if (!at_keyword(k)) unexpected(std::string("'") + k + "'");
    next();
  }

  std::string ident(const std::string& wanted = "identifier") { return expect(Tok::kIdent, wanted).text; }

  Decl decl() {
    Pos at = peek().pos;
    if (at_keyword("ctx")) {
      next();
      CtxDecl d;
      d.pos = at;
      d.name = ident("context name");
      expect(Tok::kEquals, "'='");
      if (at_keyword("load")) {
        next();
        d.source = CtxDecl::Source::kLoad;
        d.path = expect(Tok::kString, "file path").text;
      } else if (at_keyword("empty")) {
        next();
        d.source = CtxDecl::Source::kEmpty;
        if (peek().kind == Tok::kString) d.path = next().text;
      } else if (at_keyword("yoneda")) {
        next();
        d.source = CtxDecl::Source::kYoneda;
        d.path = expect(Tok::kString, "category file path").text;
        if (peek().kind == Tok::kString || peek().kind == Tok::kIdent) {
          d.object = next().text;
        } else {
          unexpected("object name");
        }
      } else {
        unexpected("'load', 'empty' or 'yoneda'");
      }
      return d;
    }
    if (at_keyword("type")) {
      next();
      TypeDecl d;
      d.pos = at;
      d.name = ident("type name");
      expect(Tok::kEquals, "'='");
      if (at_keyword("load")) {
        next();
        d.path = expect(Tok::kString, "file path").text;
      } else {
        d.type = type();
      }
      keyword("in");
      d.ctx = ident("context name");
      return d;
    }
    if (at_keyword("term")) {
      next();
      TermDecl d;
      d.pos = at;
      d.name = ident("term name");
      expect(Tok::kColon, "':'");
      d.type = type();
      expect(Tok::kEquals, "'='");
      d.term = term();
      keyword("in");
      d.ctx = ident("context name");
      std::set<std::string> seen;
      while (peek().kind == Tok::kComma) {
        next();
        Binder b;
        b.pos = peek().pos;
        b.name = ident("variable name");
        if (!seen.insert(b.name).second) fail(b.pos, "duplicate variable '" + b.name + "'");
        expect(Tok::kColon, "':'");
        b.type = type();
        d.binders.push_back(std::move(b));
      }
      return d;
    }
    if (at_keyword("eval") || at_keyword("check")) {
      Command c;
      c.kind = next().text == "eval" ? Command::Kind::kEval : Command::Kind::kCheck;
      c.pos = at;
      c.name = ident("term name");
      return c;
    }
    unexpected("'ctx', 'type', 'term', 'eval' or 'check'");
  }

  TypePtr type() {
    auto t = std::make_shared<SurfaceType>();
    t->pos = peek().pos;
    if (peek().kind == Tok::kLBrace) {
      next();
      t->kind = SurfaceType::Kind::kDiscrete;
      t->size = expect(Tok::kNat, "set size").value;
      expect(Tok::kRBrace, "'}'");
    } else if (at_keyword("Pi") || at_keyword("Sigma")) {
      t->kind = next().text == "Pi" ? SurfaceType::Kind::kPi : SurfaceType::Kind::kSigma;
      expect(Tok::kLParen, "'('");
      t->name = ident("variable name");
      expect(Tok::kColon, "':'");
      t->dom = type();
      expect(Tok::kRParen, "')'");
      t->cod = type();
    } else if (peek().kind == Tok::kIdent) {
      t->kind = SurfaceType::Kind::kRef;
      t->name = next().text;
    } else {
      unexpected("type");
    }
    return t;
  }

  bool atom_start() const {
    auto k = peek().kind;
    return k == Tok::kIdent || k == Tok::kLParen || k == Tok::kHash || k == Tok::kBackslash;
  }

  TermPtr term() {
    if (peek().kind == Tok::kBackslash) return lambda();
    TermPtr t = postfix();
    while (atom_start()) {
      auto app = std::make_shared<SurfaceTerm>();
      app->kind = SurfaceTerm::Kind::kApp;
      app->pos = t->pos;
      app->left = t;
      app->right = peek().kind == Tok::kBackslash ? lambda() : postfix();
      t = app;
    }
    return t;
  }

  TermPtr lambda() {
    auto t = std::make_shared<SurfaceTerm>();
    t->pos = next().pos;
    t->kind = SurfaceTerm::Kind::kLam;
    t->name = ident("variable name");
    expect(Tok::kDot, "'.'");
    t->left = term();
    return t;
  }

  TermPtr postfix() {
    TermPtr t = primary();
    while (peek().kind == Tok::kProj1 || peek().kind == Tok::kProj2) {
      auto p = std::make_shared<SurfaceTerm>();
      p->pos = peek().pos;
      p->kind = next().kind == Tok::kProj1 ? SurfaceTerm::Kind::kFst : SurfaceTerm::Kind::kSnd;
      p->left = t;
      t = p;
    }
    return t;
  }

  TermPtr primary() {
    auto t = std::make_shared<SurfaceTerm>();
    t->pos = peek().pos;
    switch (peek().kind) {
      case Tok::kIdent:
        t->kind = SurfaceTerm::Kind::kVar;
        t->name = next().text;
        return t;
      case Tok::kHash:
        next();
        t->kind = SurfaceTerm::Kind::kLit;
        t->value = expect(Tok::kNat, "element index").value;
        return t;
      case Tok::kLParen: {
        next();
        TermPtr first = term();
        if (peek().kind == Tok::kComma) {
          next();
          t->kind = SurfaceTerm::Kind::kPair;
          t->left = first;
          t->right = term();
          expect(Tok::kRParen, "')'");
          return t;
        }
        expect(Tok::kRParen, "')' or ','");
        return first;
      }
      default:
        unexpected("term");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printing

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// 0: anything, 1: application operand position (no bare λ), 2: atom
std::string print_term(const SurfaceTerm& t, int level) {
  using K = SurfaceTerm::Kind;
  auto paren = [](bool wrap, std::string s) { return wrap ? "(" + s + ")" : s; };
  switch (t.kind) {
    case K::kVar: return t.name;
    case K::kLit: return "#" + std::to_string(t.value);
    case K::kPair: return "(" + print_term(*t.left, 0) + ", " + print_term(*t.right, 0) + ")";
    case K::kFst: return print_term(*t.left, 2) + ".1";
    case K::kSnd: return print_term(*t.left, 2) + ".2";
    case K::kLam: return paren(level > 0, "\\" + t.name + ". " + print_term(*t.left, 0));
    case K::kApp:
      return paren(level > 1, print_term(*t.left, 1) + " " + print_term(*t.right, 2));
  }
  return {};
}

// ---------------------------------------------------------------------------
// Elaboration

CombPtr make(Combinator::Kind kind, CombPtr left = nullptr, CombPtr right = nullptr, TypePtr type = nullptr,
             std::size_t value = 0) {
  auto c = std::make_shared<Combinator>();
  c->kind = kind;
  c->left = std::move(left);
  c->right = std::move(right);
  c->type = std::move(type);
  c->value = value;
  return c;
}

class Elaborator {
 public:
  Elaborator(std::vector<Binder> ctx, const Globals* globals) : ctx_(std::move(ctx)), globals_(globals) {}

  CombPtr check(const SurfaceTerm& t, const TypePtr& expected) {
    using K = SurfaceTerm::Kind;
    using TK = SurfaceType::Kind;
    switch (t.kind) {
      case K::kLam: {
        if (expected->kind != TK::kPi)
          fail(t.pos, "lambda checked against non-function type " + print_type(*expected));
        ctx_.push_back({t.name, expected->dom, t.pos});
        auto body = check(*t.left, expected->cod);
        ctx_.pop_back();
        return make(Combinator::Kind::kLam, body, nullptr, expected);
      }
      case K::kPair: {
        if (expected->kind != TK::kSigma)
          fail(t.pos, "pair checked against non-pair type " + print_type(*expected));
        auto l = check(*t.left, expected->dom);
        auto r = check(*t.right, expected->cod);
        return make(Combinator::Kind::kPair, l, r, expected);
      }
      case K::kLit:
        if (expected->kind != TK::kDiscrete)
          fail(t.pos, "literal checked against non-discrete type " + print_type(*expected));
        if (t.value >= expected->size)
          fail(t.pos, "literal #" + std::to_string(t.value) + " is not an element of " + print_type(*expected));
        return make(Combinator::Kind::kLit, nullptr, nullptr, expected, t.value);
      default: {
        Elaborated e = infer(t);
        if (!same_type(*e.type, *expected))
          fail(t.pos, "type mismatch: expected " + print_type(*expected) + ", found " + print_type(*e.type));
        return e.term;
      }
    }
  }

  Elaborated infer(const SurfaceTerm& t) {
    using K = SurfaceTerm::Kind;
    using TK = SurfaceType::Kind;
    switch (t.kind) {
      case K::kVar: {
        for (std::size_t d = 0; d < ctx_.size(); ++d) {
          const Binder& b = ctx_[ctx_.size() - 1 - d];
          if (b.name != t.name) continue;
          CombPtr c = make(Combinator::Kind::kQ);
          for (std::size_t k = 0; k < d; ++k) c = make(Combinator::Kind::kWk, c);
          return {c, b.type};
        }
        if (globals_) {
          if (auto it = globals_->find(t.name); it != globals_->end()) {
            CombPtr c = it->second.term;
            for (std::size_t k = 0; k < ctx_.size(); ++k) c = make(Combinator::Kind::kWk, c);
            return {c, it->second.type};
          }
        }
        std::string scope;
        for (const auto& b : ctx_) scope += (scope.empty() ? "" : ", ") + b.name;
        fail(t.pos, "unbound variable '" + t.name + "' (in scope: " + (scope.empty() ? "nothing" : scope) + ")");
      }
      case K::kApp: {
        Elaborated f = infer(*t.left);
        if (f.type->kind != TK::kPi)
          fail(t.left->pos, "applying a term of non-function type " + print_type(*f.type));
        auto u = check(*t.right, f.type->dom);
        return {make(Combinator::Kind::kApp, f.term, u), f.type->cod};
      }
      case K::kFst:
      case K::kSnd: {
        Elaborated p = infer(*t.left);
        if (p.type->kind != TK::kSigma)
          fail(t.left->pos, "projecting from a term of non-pair type " + print_type(*p.type));
        bool first = t.kind == K::kFst;
        return {make(first ? Combinator::Kind::kFst : Combinator::Kind::kSnd, p.term),
                first ? p.type->dom : p.type->cod};
      }
      case K::kLam: fail(t.pos, "cannot infer the type of a lambda here; it needs an expected function type");
      case K::kPair: fail(t.pos, "cannot infer the type of a pair here; it needs an expected pair type");
      case K::kLit: fail(t.pos, "cannot infer the type of a literal here; it needs an expected set type");
    }
    fail(t.pos, "unknown term");
  }

 private:
  std::vector<Binder> ctx_;
  const Globals* globals_;
};

// ---------------------------------------------------------------------------
// Interpretation

TmInCtx interpret_at(const Model& model, ContextChain& chain, std::size_t depth, const Combinator& c) {
  using K = Combinator::Kind;
  const Ctx& here = chain.contexts[depth];
  switch (c.kind) {
    case K::kQ:
      if (depth == 0) throw MismatchError("variable outside every binder");
      return var_q(here);
    case K::kWk:
      if (depth == 0) throw MismatchError("weakening outside every binder");
      return tm_subst(interpret_at(model, chain, depth - 1, *c.left), proj_p(here));
    case K::kLam: {
      const SurfaceType& pi = *c.type;
      Ty a = interpret_type(model, *pi.dom, here, chain.to_base[depth]);
      Ctx ext = ctx_extend(here, a);
      Sub ext_to_base = compose_subs(chain.to_base[depth], proj_p(ext));
      Ty b = interpret_type(model, *pi.cod, ext, ext_to_base);
      ContextChain inner{{chain.contexts.begin(), chain.contexts.begin() + depth + 1},
                         {chain.to_base.begin(), chain.to_base.begin() + depth + 1}};
      inner.contexts.push_back(ext);
      inner.to_base.push_back(ext_to_base);
      TmInCtx body = interpret_at(model, inner, depth + 1, *c.left);
      return lambda_tm(pi_ty(a, b, model.pi_cap), body);
    }
    case K::kApp:
      return app_tm(interpret_at(model, chain, depth, *c.left), interpret_at(model, chain, depth, *c.right));
    case K::kPair: {
      Ty sigma = interpret_type(model, *c.type, here, chain.to_base[depth]);
      return pair_tm(sigma, interpret_at(model, chain, depth, *c.left), interpret_at(model, chain, depth, *c.right));
    }
    case K::kFst: return fst_tm(interpret_at(model, chain, depth, *c.left));
    case K::kSnd: return snd_tm(interpret_at(model, chain, depth, *c.left));
    case K::kLit: return discrete_tm(here, FinSet{c.type->size, {}}, static_cast<Elem>(c.value));
  }
  throw MismatchError("unknown combinator");
}

// ---------------------------------------------------------------------------
// Sessions

struct CtxEntry {
  Ctx ctx;
};

struct TypeEntry {
  std::string ctx;
  TypePtr surface;  // definition with aliases unfolded; null when loaded
  Ty value;
};

/// Unfolds every reference to a type declared by a type expression, so
/// that only loaded types remain opaque.
TypePtr unfold(const TypePtr& t, const std::map<std::string, TypeEntry>& types) {
  switch (t->kind) {
    case SurfaceType::Kind::kDiscrete: return t;
    case SurfaceType::Kind::kRef: {
      auto it = types.find(t->name);
      return it != types.end() && it->second.surface ? it->second.surface : t;
    }
    default: {
      auto out = std::make_shared<SurfaceType>(*t);
      out->dom = unfold(t->dom, types);
      out->cod = unfold(t->cod, types);
      return out;
    }
  }
}

CategoryRef load_base(const std::filesystem::path& dir, const std::string& path) {
  return load_category(dir / path);
}

void check_refs(const SurfaceType& t, const std::string& ctx, const std::map<std::string, TypeEntry>& types) {
  switch (t.kind) {
    case SurfaceType::Kind::kDiscrete: return;
    case SurfaceType::Kind::kRef: {
      auto it = types.find(t.name);
      if (it == types.end()) fail(t.pos, "unknown type '" + t.name + "'");
      if (it->second.ctx != ctx)
        fail(t.pos, "type '" + t.name + "' lives over context '" + it->second.ctx + "', not '" + ctx + "'");
      return;
    }
    default:
      check_refs(*t.dom, ctx, types);
      check_refs(*t.cod, ctx, types);
  }
}

Model model_for(const std::string& ctx, const Ctx& base, const std::map<std::string, TypeEntry>& types,
                std::size_t pi_cap) {
  Model m{base, {}, pi_cap};
  for (const auto& [name, entry] : types)
    if (entry.ctx == ctx) m.types.emplace(name, entry.value);
  return m;
}

}  // namespace

Script parse_script(const std::string& text) { return Parser(text).script(); }
TermPtr parse_term(const std::string& text) { return Parser(text).whole_term(); }
TypePtr parse_type(const std::string& text) { return Parser(text).whole_type(); }

bool same_type(const SurfaceType& a, const SurfaceType& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case SurfaceType::Kind::kDiscrete: return a.size == b.size;
    case SurfaceType::Kind::kRef: return a.name == b.name;
    default: return same_type(*a.dom, *b.dom) && same_type(*a.cod, *b.cod);
  }
}

bool same_term(const SurfaceTerm& a, const SurfaceTerm& b) {
  if (a.kind != b.kind || a.name != b.name || a.value != b.value) return false;
  if (static_cast<bool>(a.left) != static_cast<bool>(b.left)) return false;
  if (static_cast<bool>(a.right) != static_cast<bool>(b.right)) return false;
  return (!a.left || same_term(*a.left, *b.left)) && (!a.right || same_term(*a.right, *b.right));
}

namespace {

bool same_binder_names(const SurfaceType& a, const SurfaceType& b) {
  if (a.name != b.name) return false;
  if (a.kind != SurfaceType::Kind::kPi && a.kind != SurfaceType::Kind::kSigma) return true;
  return same_binder_names(*a.dom, *b.dom) && same_binder_names(*a.cod, *b.cod);
}

bool identical_type(const TypePtr& a, const TypePtr& b) {
  if (!a || !b) return !a && !b;
  return same_type(*a, *b) && same_binder_names(*a, *b);
}

bool same_decl(const Decl& x, const Decl& y) {
  if (x.index() != y.index()) return false;
  if (auto* a = std::get_if<CtxDecl>(&x)) {
    auto& b = std::get<CtxDecl>(y);
    return a->name == b.name && a->source == b.source && a->path == b.path && a->object == b.object;
  }
  if (auto* a = std::get_if<TypeDecl>(&x)) {
    auto& b = std::get<TypeDecl>(y);
    return a->name == b.name && a->path == b.path && a->ctx == b.ctx && identical_type(a->type, b.type);
  }
  if (auto* a = std::get_if<TermDecl>(&x)) {
    auto& b = std::get<TermDecl>(y);
    if (a->name != b.name || a->ctx != b.ctx || !identical_type(a->type, b.type) ||
        !same_term(*a->term, *b.term) || a->binders.size() != b.binders.size())
      return false;
    for (std::size_t i = 0; i < a->binders.size(); ++i)
      if (a->binders[i].name != b.binders[i].name || !identical_type(a->binders[i].type, b.binders[i].type))
        return false;
    return true;
  }
  auto& a = std::get<Command>(x);
  auto& b = std::get<Command>(y);
  return a.kind == b.kind && a.name == b.name;
}

}  // namespace

bool same_script(const Script& a, const Script& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i)
    if (!same_decl(a.decls[i], b.decls[i])) return false;
  return true;
}

std::string print_type(const SurfaceType& t) {
  switch (t.kind) {
    case SurfaceType::Kind::kDiscrete: return "{" + std::to_string(t.size) + "}";
    case SurfaceType::Kind::kRef: return t.name;
    case SurfaceType::Kind::kPi:
    case SurfaceType::Kind::kSigma:
      return std::string(t.kind == SurfaceType::Kind::kPi ? "Pi" : "Sigma") + "(" + t.name + ":" +
             print_type(*t.dom) + ") " + print_type(*t.cod);
  }
  return {};
}

std::string print_surface(const SurfaceTerm& t) { return print_term(t, 0); }

std::string print_script(const Script& s) {
  std::ostringstream out;
  for (const auto& d : s.decls) {
    if (auto* c = std::get_if<CtxDecl>(&d)) {
      out << "ctx " << c->name << " = ";
      switch (c->source) {
        case CtxDecl::Source::kLoad: out << "load " << quote(c->path); break;
        case CtxDecl::Source::kEmpty: out << "empty" << (c->path.empty() ? "" : " " + quote(c->path)); break;
        case CtxDecl::Source::kYoneda: out << "yoneda " << quote(c->path) << " " << quote(c->object); break;
      }
    } else if (auto* t = std::get_if<TypeDecl>(&d)) {
      out << "type " << t->name << " = " << (t->type ? print_type(*t->type) : "load " + quote(t->path)) << " in "
          << t->ctx;
    } else if (auto* m = std::get_if<TermDecl>(&d)) {
      out << "term " << m->name << " : " << print_type(*m->type) << " = " << print_surface(*m->term) << " in "
          << m->ctx;
      for (const auto& b : m->binders) out << ", " << b.name << ":" << print_type(*b.type);
    } else {
      auto& c = std::get<Command>(d);
      out << (c.kind == Command::Kind::kEval ? "eval " : "check ") << c.name;
    }
    out << "\n";
  }
  return out.str();
}

std::string print_combinator(const Combinator& c) {
  using K = Combinator::Kind;
  switch (c.kind) {
    case K::kQ: return "q";
    case K::kWk: return "(" + print_combinator(*c.left) + ")p";
    case K::kLam: return "lam(" + print_combinator(*c.left) + ")";
    case K::kApp: return "app(" + print_combinator(*c.left) + ", " + print_combinator(*c.right) + ")";
    case K::kPair: return "(" + print_combinator(*c.left) + ", " + print_combinator(*c.right) + ")";
    case K::kFst: return print_combinator(*c.left) + ".1";
    case K::kSnd: return print_combinator(*c.left) + ".2";
    case K::kLit: return "#" + std::to_string(c.value);
  }
  return {};
}

Elaborated elaborate(const std::vector<Binder>& ctx, const TermPtr& t, const TypePtr& expected,
                     const Globals* globals) {
  return {Elaborator(ctx, globals).check(*t, expected), expected};
}

Ty interpret_type(const Model& model, const SurfaceType& t, const Ctx& over, const Sub& to_base) {
  switch (t.kind) {
    case SurfaceType::Kind::kDiscrete: return discrete_ty(over, FinSet{t.size, {}});
    case SurfaceType::Kind::kRef: {
      auto it = model.types.find(t.name);
      if (it == model.types.end()) throw MismatchError("unknown type '" + t.name + "'");
      if (over == model.base) return it->second;
      return ty_subst(it->second, to_base);
    }
    case SurfaceType::Kind::kPi:
    case SurfaceType::Kind::kSigma: {
      Ty a = interpret_type(model, *t.dom, over, to_base);
      Ctx ext = ctx_extend(over, a);
      Ty b = interpret_type(model, *t.cod, ext, compose_subs(to_base, proj_p(ext)));
      return t.kind == SurfaceType::Kind::kPi ? pi_ty(a, b, model.pi_cap) : sigma_ty(a, b);
    }
  }
  throw MismatchError("unknown type");
}

ContextChain interpret_context(const Model& model, const std::vector<Binder>& binders) {
  ContextChain chain{{model.base}, {identity_sub(model.base)}};
  for (const auto& b : binders) {
    Ty a = interpret_type(model, *b.type, chain.contexts.back(), chain.to_base.back());
    Ctx ext = ctx_extend(chain.contexts.back(), a);
    chain.to_base.push_back(compose_subs(chain.to_base.back(), proj_p(ext)));
    chain.contexts.push_back(ext);
  }
  return chain;
}

TmInCtx interpret_term(const Model& model, const ContextChain& chain, const Combinator& c) {
  ContextChain copy = chain;
  return interpret_at(model, copy, copy.contexts.size() - 1, c);
}

SessionResult run_script(const Script& script, const std::filesystem::path& dir, std::size_t pi_cap) {
  SessionResult result;
  std::map<std::string, CtxEntry> ctxs;
  std::map<std::string, TypeEntry> types;
  std::set<std::string> terms;
  std::map<std::string, Globals> globals;  // per context

  auto find_ctx = [&](const std::string& name, const Pos& pos) -> const Ctx& {
    auto it = ctxs.find(name);
    if (it == ctxs.end()) fail(pos, "unknown context '" + name + "'");
    return it->second.ctx;
  };

  for (const auto& d : script.decls) {
    if (auto* c = std::get_if<CtxDecl>(&d)) {
      try {
        switch (c->source) {
          case CtxDecl::Source::kLoad: ctxs[c->name] = {load_presheaf(dir / c->path)}; break;
          case CtxDecl::Source::kEmpty:
            ctxs[c->name] = {empty_ctx(c->path.empty() ? terminal_cat() : load_base(dir, c->path))};
            break;
          case CtxDecl::Source::kYoneda: {
            auto cat = load_base(dir, c->path);
            auto x = cat->find_object(c->object);
            if (!x) fail(c->pos, "unknown object '" + c->object + "'");
            ctxs[c->name] = {yoneda(cat, *x)};
            break;
          }
        }
      } catch (const InputError& e) {
        if (e.line() != 0) throw InputError(c->path + ": " + e.message(), e.line(), e.col());
        throw InputError(e.message(), c->pos.line, c->pos.col);
      }
      auto report = validate_presheaf(*ctxs[c->name].ctx);
      if (!report.ok()) fail(c->pos, "context '" + c->name + "' is not a presheaf: " + report.to_string());
    } else if (auto* t = std::get_if<TypeDecl>(&d)) {
      const Ctx& h = find_ctx(t->ctx, t->pos);
      TypeEntry entry{t->ctx, nullptr, nullptr};
      if (t->type) {
        check_refs(*t->type, t->ctx, types);
        entry.surface = unfold(t->type, types);
        try {
          entry.value = interpret_type(model_for(t->ctx, h, types, pi_cap), *t->type, h, identity_sub(h));
        } catch (const MismatchError& e) {
          fail(t->pos, std::string("cannot interpret type: ") + e.what());
        }
      } else {
        try {
          entry.value = load_type(dir / t->path);
        } catch (const InputError& e) {
          if (e.line() != 0) throw InputError(t->path + ": " + e.message(), e.line(), e.col());
          throw InputError(e.message(), t->pos.line, t->pos.col);
        }
        if (!same_presheaf(entry.value->ctx, h)) fail(t->pos, "type '" + t->name + "' is not over '" + t->ctx + "'");
        auto report = validate_ty(*entry.value);
        if (!report.ok()) fail(t->pos, "type '" + t->name + "' is invalid: " + report.to_string());
      }
      types[t->name] = entry;
    } else if (auto* m = std::get_if<TermDecl>(&d)) {
      const Ctx& h = find_ctx(m->ctx, m->pos);
      check_refs(*m->type, m->ctx, types);
      std::vector<Binder> binders = m->binders;
      for (auto& b : binders) {
        check_refs(*b.type, m->ctx, types);
        b.type = unfold(b.type, types);
      }
      TypePtr type = unfold(m->type, types);
      Elaborated e = elaborate(binders, m->term, type, &globals[m->ctx]);
      Model model = model_for(m->ctx, h, types, pi_cap);
      TermResult r;
      r.name = m->name;
      r.combinator = e.term;
      try {
        ContextChain chain = interpret_context(model, binders);
        Ty expected = interpret_type(model, *type, chain.contexts.back(), chain.to_base.back());
        r.value = interpret_term(model, chain, *e.term);
        if (!same_ty(r.value.ty, expected))
          fail(m->pos, "type-annotation mismatch: the interpreted term does not have type " + print_type(*m->type));
      } catch (const MismatchError& err) {
        fail(m->pos, std::string("type-annotation mismatch during interpretation: ") + err.what());
      }
      r.validation = validate_tm(r.value);
      terms.insert(m->name);
      if (binders.empty()) globals[m->ctx].emplace(m->name, e);
      result.terms.push_back(std::move(r));
    } else {
      auto& c = std::get<Command>(d);
      if (!terms.contains(c.name)) fail(c.pos, "unknown term '" + c.name + "'");
      (c.kind == Command::Kind::kEval ? result.eval_targets : result.check_targets).push_back(c.name);
    }
  }
  return result;
}

SessionResult run_script_file(const std::filesystem::path& path, std::size_t pi_cap) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return run_script(parse_script(buf.str()), path.parent_path(), pi_cap);
  } catch (const InputError& e) {
    throw InputError(path.filename().string() + ": " + e.message(), e.line(), e.col());
  }
}

}  // namespace pcwf::surface
