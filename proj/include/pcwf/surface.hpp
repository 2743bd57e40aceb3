#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pcwf/formers.hpp"

namespace pcwf::surface {

struct Pos {
  std::size_t line = 0;
  std::size_t col = 0;
};

struct SurfaceType;
using TypePtr = std::shared_ptr<const SurfaceType>;

/// {n} | Pi(x:A) B | Sigma(x:A) B | named type. Types never mention term
/// variables; a binder name only documents the bound position.
struct SurfaceType {
  enum class Kind { kDiscrete, kPi, kSigma, kRef };
  Kind kind = Kind::kDiscrete;
  std::size_t size = 0;  // kDiscrete
  std::string name;      // binder (kPi, kSigma) or referenced type (kRef)
  TypePtr dom, cod;
  Pos pos;
};

struct SurfaceTerm;
using TermPtr = std::shared_ptr<const SurfaceTerm>;

struct SurfaceTerm {
  enum class Kind { kVar, kLam, kApp, kPair, kFst, kSnd, kLit };
  Kind kind = Kind::kVar;
  std::string name;      // kVar, kLam
  TermPtr left, right;   // kLam body in left; kApp fun/arg; kPair; kFst/kSnd operand in left
  std::size_t value = 0;  // kLit
  Pos pos;
};

struct Binder {
  std::string name;
  TypePtr type;
  Pos pos;
};

/// ctx H = load "file.json" | empty ["category.json"] | yoneda "category.json" object
struct CtxDecl {
  enum class Source { kLoad, kEmpty, kYoneda };
  std::string name;
  Source source = Source::kEmpty;
  std::string path;
  std::string object;
  Pos pos;
};

/// type T = tyexpr in H, or type T = load "type.json" in H
struct TypeDecl {
  std::string name;
  TypePtr type;      // null when loaded
  std::string path;  // set when loaded
  std::string ctx;
  Pos pos;
};

/// term t : tyexpr = tmexpr in H, x:A, ...
struct TermDecl {
  std::string name;
  TypePtr type;
  TermPtr term;
  std::string ctx;
  std::vector<Binder> binders;
  Pos pos;
};

/// eval t | check t
struct Command {
  enum class Kind { kEval, kCheck };
  Kind kind = Kind::kEval;
  std::string name;
  Pos pos;
};

using Decl = std::variant<CtxDecl, TypeDecl, TermDecl, Command>;

struct Script {
  std::vector<Decl> decls;
};

/// Parses a script; errors are InputError with line and column.
Script parse_script(const std::string& text);
TermPtr parse_term(const std::string& text);
TypePtr parse_type(const std::string& text);

// Structural equality, ignoring source positions (and, for types, binder names).
bool same_type(const SurfaceType& a, const SurfaceType& b);
bool same_term(const SurfaceTerm& a, const SurfaceTerm& b);
bool same_script(const Script& a, const Script& b);

std::string print_type(const SurfaceType& t);
std::string print_surface(const SurfaceTerm& t);
std::string print_script(const Script& s);

// ---------------------------------------------------------------------------
// Name-free core

struct Combinator;
using CombPtr = std::shared_ptr<const Combinator>;

/// q | (t)p | λ(b) | app(f, u) | (l, r) | t.1 | t.2 | #k. λ, pairs and
/// literals carry the type they were checked against.
struct Combinator {
  enum class Kind { kQ, kWk, kLam, kApp, kPair, kFst, kSnd, kLit };
  Kind kind = Kind::kQ;
  CombPtr left, right;
  std::size_t value = 0;
  TypePtr type;
};

std::string print_combinator(const Combinator& c);

struct Elaborated {
  CombPtr term;
  TypePtr type;
};

/// Closed terms declared earlier over the same context, usable by name.
using Globals = std::map<std::string, Elaborated>;

/// Checks t against `expected` in the named context (innermost binder
/// last) and translates it to combinators: the variable at distance d from
/// the right becomes q under d weakenings, and a global under n binders is
/// weakened n times.
Elaborated elaborate(const std::vector<Binder>& ctx, const TermPtr& t, const TypePtr& expected,
                     const Globals* globals = nullptr);

// ---------------------------------------------------------------------------
// Interpretation in the presheaf model

/// Named types are types over `base`.
struct Model {
  Ctx base;
  std::map<std::string, Ty> types;
  std::size_t pi_cap = kDefaultPiCap;
};

/// The interpreted context H.A1...An: contexts[i] has i binders and
/// to_base[i] : contexts[i] → H composes the projections.
struct ContextChain {
  std::vector<Ctx> contexts;
  std::vector<Sub> to_base;
};

Ty interpret_type(const Model& model, const SurfaceType& t, const Ctx& over, const Sub& to_base);
ContextChain interpret_context(const Model& model, const std::vector<Binder>& binders);
/// The term over the last context of the chain.
TmInCtx interpret_term(const Model& model, const ContextChain& chain, const Combinator& c);

// ---------------------------------------------------------------------------
// Script sessions

struct TermResult {
  std::string name;
  CombPtr combinator;
  TmInCtx value;
  Report validation;
};

struct SessionResult {
  std::vector<TermResult> terms;          // in declaration order
  std::vector<std::string> eval_targets;  // names listed by eval commands
  std::vector<std::string> check_targets;
};

/// Runs every declaration; relative paths resolve against `dir`.
SessionResult run_script(const Script& script, const std::filesystem::path& dir, std::size_t pi_cap = kDefaultPiCap);
SessionResult run_script_file(const std::filesystem::path& path, std::size_t pi_cap = kDefaultPiCap);

}  // namespace pcwf::surface
