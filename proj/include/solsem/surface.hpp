#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "solsem/ast.hpp"

// Untyped syntax tree of .lls source files, as produced by the parser.

namespace solsem {

struct SrcPos {
  int line = 1;
  int col = 1;
};

/// Parse and binding errors, with the position they refer to.
struct FrontendError : std::runtime_error {
  FrontendError(SrcPos at, const std::string& message)
      : std::runtime_error(std::to_string(at.line) + ":" + std::to_string(at.col) + ": " + message), pos(at) {}
  SrcPos pos;
};

struct SType {
  enum class Kind { Bool, Int, Address, Mapping, Named, Array };
  Kind kind = Kind::Int;
  IntType int_type;
  std::string name;             // Named
  std::vector<SType> children;  // Mapping: key, value; Array: element
  std::uint64_t length = 0;     // Array
  SrcPos pos;
};

struct SExpr {
  enum class Kind { Number, Bool, Ident, This, Binary, Unary, Index, Member, Call, Tuple };
  Kind kind = Kind::Number;
  SrcPos pos;
  std::string text;  // digits, identifier or member name
  bool bit = false;
  BinOp bop = BinOp::Add;
  UnOp uop = UnOp::Not;
  /// Binary: lhs, rhs. Unary: operand. Index: base, index. Member: base.
  /// Call: callee, arguments. Tuple: elements.
  std::vector<SExpr> kids;
};

struct SStmt {
  enum class Kind {
    Block,
    VarDecl,
    Assign,
    CompoundAssign,
    Call,
    If,
    While,
    For,
    Return,
    Throw,
    Require,
    Placeholder,
    Emit,
    Empty
  };
  Kind kind = Kind::Empty;
  SrcPos pos;
  SType type;                  // VarDecl
  std::string name;            // VarDecl
  std::optional<SExpr> expr;   // VarDecl initializer, Assign value, Call, Return value, condition
  std::optional<SExpr> target; // Assign / CompoundAssign target
  BinOp op = BinOp::Add;       // CompoundAssign
  std::vector<SStmt> body;     // Block, If then, loops
  std::vector<SStmt> orelse;   // If else
  std::vector<SStmt> init;     // For init (0 or 1)
  std::vector<SStmt> post;     // For post (0 or 1)
};

struct SParam {
  SType type;
  std::string name;
  SrcPos pos;
};

struct SModifierUse {
  std::string name;
  std::vector<SExpr> args;
  SrcPos pos;
};

struct SFunction {
  bool is_modifier = false;
  std::string name;
  std::vector<SParam> params;
  std::vector<SType> returns;
  std::vector<SModifierUse> modifiers;
  std::vector<SStmt> body;
  SrcPos pos;
};

struct SStateVar {
  SType type;
  std::optional<Access> access;
  std::string name;
  std::optional<SExpr> init;
  SrcPos pos;
};

struct SStruct {
  std::string name;
  std::vector<SParam> members;
  SrcPos pos;
};

struct SEvent {
  std::string name;
  SrcPos pos;
};

using SMember = std::variant<SStruct, SStateVar, SFunction, SEvent>;

struct SContract {
  std::string name;
  std::vector<std::string> bases;
  std::vector<SMember> members;
  SrcPos pos;
};

struct SourceProgram {
  std::vector<SContract> contracts;
};

/// Throws FrontendError on lexical or syntax errors.
SourceProgram parse_source(const std::string& text);
/// A sequence of statements, as used by pre-state writes and summaries.
std::vector<SStmt> parse_statements(const std::string& text);
SExpr parse_expression(const std::string& text);

}  // namespace solsem
