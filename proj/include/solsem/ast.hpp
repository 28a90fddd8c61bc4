#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "solsem/types.hpp"

// Typed abstract syntax. Programs are statement lists; there is no sequence
// node, so the next statement to run is always the head of the list.

namespace solsem {

enum class BinOp { Add, Sub, Mul, Div, Mod, Lt, Gt, Le, Ge, Eq, Ne, And, Or };
enum class UnOp { Not, Neg };

const char* to_string(BinOp op);
const char* to_string(UnOp op);

struct LExpr;
struct LStatement;
using StmtList = std::vector<LStatement>;

namespace val {
struct Bool {
  bool bit = false;
  friend bool operator==(const Bool&, const Bool&) = default;
};
struct Int {
  IntType type;
  std::uint64_t bits = 0;  // two's complement, truncated to type.width
  friend bool operator==(const Int&, const Int&) = default;
};
/// a[i0][i1]...: `array_type` is the declared array type of `base`.
struct Array {
  LType array_type;
  std::vector<LExpr> indices;
  Address base;
  friend bool operator==(const Array&, const Array&);
};
/// m[k0][k1]...: `map_type` is the declared mapping type of `base`.
struct Map {
  Address base;
  std::vector<LExpr> keys;
  LType map_type;
  std::optional<Address> next;
  friend bool operator==(const Map&, const Map&);
};
struct Struct {
  Address type;
  Address instance;
  friend bool operator==(const Struct&, const Struct&) = default;
};
/// head.m0.m1...; `args` is present when the last member is called.
struct Field {
  LType result;
  Address head;
  std::vector<std::string> members;
  std::optional<std::vector<LExpr>> args;
  friend bool operator==(const Field&, const Field&);
};
}  // namespace val

struct LValue {
  using Node = std::variant<val::Bool, val::Int, val::Array, val::Map, val::Struct, val::Field>;
  Node node;

  template <class T>
  const T* as() const { return std::get_if<T>(&node); }

  friend bool operator==(const LValue&, const LValue&) = default;
};

/// (source type, result type) assigned by the typechecker.
struct TypePair {
  LType source;
  LType result;
  friend bool operator==(const TypePair&, const TypePair&) = default;
};

namespace ex {
struct Const {
  LValue value;
  friend bool operator==(const Const&, const Const&) = default;
};
struct Var {
  std::optional<Address> addr;
  LType type;
  friend bool operator==(const Var&, const Var&) = default;
};
struct Fun {
  std::optional<Address> addr;
  LType type;
  friend bool operator==(const Fun&, const Fun&) = default;
};
struct Con {
  std::optional<Address> addr;
  friend bool operator==(const Con&, const Con&) = default;
};
struct Par {
  std::optional<Address> addr;
  LType type;
  friend bool operator==(const Par&, const Par&) = default;
};
struct Struct {
  Address type;
  std::vector<LExpr> fields;
  friend bool operator==(const Struct&, const Struct&);
};
struct Bop {
  BinOp op;
  Box<LExpr> lhs;
  Box<LExpr> rhs;
  friend bool operator==(const Bop&, const Bop&) = default;
};
struct Uop {
  UnOp op;
  Box<LExpr> operand;
  friend bool operator==(const Uop&, const Uop&) = default;
};
struct Modifier {
  friend bool operator==(const Modifier&, const Modifier&) = default;
};
}  // namespace ex

struct LExpr {
  using Node = std::variant<ex::Const, ex::Var, ex::Fun, ex::Con, ex::Par, ex::Struct, ex::Bop, ex::Uop, ex::Modifier>;
  Node node = ex::Modifier{};
  std::optional<TypePair> types;

  template <class T>
  const T* as() const { return std::get_if<T>(&node); }

  friend bool operator==(const LExpr&, const LExpr&) = default;
};

// Expression builders. These leave `types` empty; run the typechecker to fill it.
LExpr make_bool(bool b);
LExpr make_int(std::int64_t v, IntType t = IntType::u64());
LExpr make_var(Address a, LType t);
LExpr make_bop(BinOp op, LExpr lhs, LExpr rhs);
LExpr make_uop(UnOp op, LExpr e);

struct StructMember {
  std::string name;
  LType type;
  friend bool operator==(const StructMember&, const StructMember&) = default;
};

struct Param {
  std::string name;
  Address addr;
  LType type;
  friend bool operator==(const Param&, const Param&) = default;
};

struct ModifierCall {
  Address modifier;
  std::vector<LExpr> args;
  friend bool operator==(const ModifierCall&, const ModifierCall&) = default;
};

namespace st {
struct Contract {
  Address addr;
  std::string name;
  std::vector<Address> inherits;
  std::vector<std::pair<std::string, Address>> members;
  friend bool operator==(const Contract&, const Contract&) = default;
};
struct Modifier {
  Address addr;
  std::string name;
  std::vector<Param> params;
  Address return_slot;
  StmtList body;
  friend bool operator==(const Modifier&, const Modifier&);
};
struct Var {
  std::optional<Access> access;
  LExpr var;  // an ex::Var
  friend bool operator==(const Var&, const Var&) = default;
};
struct StructDecl {
  Address type;
  std::vector<StructMember> members;
  friend bool operator==(const StructDecl&, const StructDecl&) = default;
};
struct Assign {
  LExpr lhs;
  LExpr rhs;
  friend bool operator==(const Assign&, const Assign&) = default;
};
struct Return {
  LExpr value;
  friend bool operator==(const Return&, const Return&) = default;
};
struct Returns {
  std::vector<LExpr> values;
  friend bool operator==(const Returns&, const Returns&) = default;
};
struct Throw {
  friend bool operator==(const Throw&, const Throw&) = default;
};
struct Snil {
  friend bool operator==(const Snil&, const Snil&) = default;
};
struct FunStop {
  friend bool operator==(const FunStop&, const FunStop&) = default;
};
struct Fun {
  Address addr;
  std::string name;
  std::vector<ModifierCall> modifiers;
  std::vector<Param> params;
  std::vector<LType> returns;
  Address return_slot;  // first of returns.size() consecutive slots
  std::vector<Address> locals;
  StmtList body;
  friend bool operator==(const Fun&, const Fun&);
};
/// `init` runs once before the first condition test; Snil means none.
struct LoopFor {
  LExpr cond;
  Box<LStatement> init;
  StmtList body;
  Box<LStatement> post;
  friend bool operator==(const LoopFor&, const LoopFor&);
};
struct LoopWhile {
  LExpr cond;
  StmtList body;
  friend bool operator==(const LoopWhile&, const LoopWhile&);
};
struct FunCall {
  LExpr callee;
  std::vector<LExpr> args;
  friend bool operator==(const FunCall&, const FunCall&) = default;
};
struct If {
  LExpr cond;
  StmtList then_branch;
  StmtList else_branch;
  friend bool operator==(const If&, const If&);
};
}  // namespace st

struct LStatement {
  using Node = std::variant<st::Contract, st::Modifier, st::Var, st::StructDecl, st::Assign, st::Return, st::Returns,
                            st::Throw, st::Snil, st::FunStop, st::Fun, st::LoopFor, st::LoopWhile, st::FunCall, st::If>;
  Node node = st::Snil{};

  template <class T>
  const T* as() const { return std::get_if<T>(&node); }
  template <class T>
  bool is() const { return std::holds_alternative<T>(node); }

  friend bool operator==(const LStatement&, const LStatement&) = default;
};

/// Short constructor name of a statement ("If", "Assign", ...).
const char* statement_name(const LStatement& s);

/// Raw statement tree with explicit sequencing, as produced before normalization.
struct StmtTree {
  std::variant<LStatement, std::vector<StmtTree>> node;

  static StmtTree leaf(LStatement s) { return {std::move(s)}; }
  static StmtTree seq(std::vector<StmtTree> items) { return {std::move(items)}; }
};

/// Flattens nested sequences into a statement list, preserving order.
/// Statement lists nested inside If/loop/function bodies are left as they are.
StmtList normalize_seq(const StmtTree& tree);
StmtList normalize_seq(const StmtList& list);

}  // namespace solsem
