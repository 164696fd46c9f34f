// Input language: process networks, the model/spec index lists and fairness assumptions.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsim/env.hpp"

namespace tsim::lang {

struct SrcLoc {
  int line = 0;
  int col = 0;
  // Positions never take part in structural comparison.
  bool operator==(const SrcLoc &) const { return true; }
};

struct LangDiagnostic {
  std::string kind;  // lexical, syntax, semantic
  SrcLoc loc;
  std::string message;
  std::string str() const;
};

// ---- Lexer -------------------------------------------------------------

enum class Tok {
  Ident, Int, Str, PS, Semi, Comma, LBrace, RBrace, LParen, RParen, At, Bar, Colon, DotDot, Arrow,
  Bang, Quest, And, Or, Lt, Le, Eq, Ge, Gt, Assign, Plus, Minus, End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long value = 0;
  SrcLoc loc;
};

/// Throws nothing; lexical errors are appended to `diags`.
std::vector<Token> lex(const std::string &text, std::vector<LangDiagnostic> &diags);

// ---- Syntax tree -------------------------------------------------------

struct IntExpr {
  enum class Kind { Lit, PS, Var, Add, Sub, Neg } kind = Kind::Lit;
  long long value = 0;
  std::string var;
  std::vector<IntExpr> args;
  bool operator==(const IntExpr &) const = default;
};

struct PredAst {
  enum class Kind { True, False, Ref, Clock, Not, And, Or } kind = Kind::True;
  std::string name;
  std::optional<IntExpr> proc;  // `name@(proc)`; own process when absent
  Cmp cmp = Cmp::LE;
  long long value = 0;
  std::vector<PredAst> args;
  SrcLoc loc;
  bool operator==(const PredAst &) const = default;
};

struct Quant {
  std::string var;
  IntExpr lo, hi;
  SrcLoc loc;
  bool operator==(const Quant &) const = default;
};

struct FairItem {
  bool strong = true;
  bool is_event = false;
  std::optional<PredAst> pre;  // event precondition, or the state predicate
  std::string event;
  std::optional<Dir> dir;
  std::optional<IntExpr> tag;
  std::optional<PredAst> post;
  SrcLoc loc;
  bool operator==(const FairItem &) const = default;
};

struct AssumeBlock {
  std::optional<IntExpr> owner;  // absent: environment-wide
  std::vector<FairItem> items;
  std::optional<Quant> quant;  // binds items[quant_from..]
  size_t quant_from = 0;
  SrcLoc loc;
  bool operator==(const AssumeBlock &) const = default;
};

struct LocDecl {
  std::string name;
  std::optional<PredAst> inv;
  bool operator==(const LocDecl &) const = default;
};

struct TransDecl {
  std::string source, target;
  std::optional<PredAst> guard;
  std::optional<Dir> dir;
  std::string event;
  std::vector<std::string> resets;
  SrcLoc loc;
  bool operator==(const TransDecl &) const = default;
};

struct ProcessDecl {
  std::optional<Quant> range;  // template over a binder; otherwise `index`
  IntExpr index;
  std::optional<std::string> name;
  std::vector<std::string> clocks;
  std::vector<LocDecl> locations;
  std::optional<PredAst> initial;
  std::vector<TransDecl> transitions;
  SrcLoc loc;
  bool operator==(const ProcessDecl &) const = default;
};

struct RequirementFile {
  std::optional<long long> ps;
  std::vector<IntExpr> model_indices, spec_indices;
  std::vector<ProcessDecl> processes;
  std::vector<AssumeBlock> assumes;
  bool operator==(const RequirementFile &) const = default;
};

struct ParseResult {
  std::optional<RequirementFile> file;  // empty whenever a diagnostic was raised
  std::vector<LangDiagnostic> diags;
};

ParseResult parse(const std::string &text);

/// Canonical text; parse(print(f)) == f.
std::string print(const RequirementFile &f);
std::string print(const PredAst &p);
std::string print(const IntExpr &e);

// ---- Expansion ---------------------------------------------------------

/// Concrete network: processes by index with instantiated symbol names.
struct Network {
  long long ps = 0;
  std::vector<int> model, spec, env;
  std::map<int, Proc> procs;
  MFAssumption model_fair, spec_fair, env_fair;
};

struct ExpandResult {
  std::optional<Network> net;
  std::vector<LangDiagnostic> diags;
};

/// Substitutes #PS (the override wins over the file's value) and unrolls quantifiers.
ExpandResult expand(const RequirementFile &f, std::optional<long long> ps = std::nullopt);

/// Fairness assumptions per role, after expansion.
struct RoleAssumptions {
  MFAssumption model, spec, env;
};
std::optional<RoleAssumptions> expand_assumptions(const RequirementFile &f, long long ps,
                                                  std::vector<LangDiagnostic> &diags);

/// Symbol of location/clock `name` of process k.
std::string symbol(const std::string &name, long long k);

/// Model/spec pair, environment when present. Requires exactly one model and one spec process.
EnvInstance to_env_instance(const Network &net);
/// Instance for the requested mode; a network without environment yields the plain pair.
CheckInstance to_check_instance(const Network &net, Mode mode);

/// Machine-readable dump of the expanded network.
std::string to_json(const Network &net);

}  // namespace tsim::lang
