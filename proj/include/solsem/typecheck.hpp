#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "solsem/ast.hpp"

// Static typing. Every checked expression gets its (source, result) type
// pair written into LExpr::types; the semantics never re-check types.

namespace solsem {

struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FunctionSignature {
  std::vector<LType> params;
  std::vector<LType> returns;
};

struct TypeContext {
  std::map<Address, std::vector<StructMember>> structs;
  /// Declared type of named blocks; lets field access be checked.
  std::map<Address, LType> variables;
  std::map<Address, FunctionSignature> functions;
  /// Return types of the enclosing function, when inside one.
  std::optional<std::vector<LType>> returns;

  /// Context that knows the standard-library struct types for memory_size.
  static TypeContext with_stdlib(std::size_t memory_size);
};

/// Checks e and annotates it (and its sub-expressions). Throws TypeError.
TypePair typecheck_expr(LExpr& e, const TypeContext& ctx);

/// Checks and annotates a statement list. Struct and function declarations
/// met along the way extend the context for the statements after them.
std::optional<std::string> typecheck_stmts(StmtList& stmts, TypeContext& ctx);

/// Convenience wrapper over a copy of the context.
std::optional<std::string> typecheck_program(StmtList& stmts, TypeContext ctx);

}  // namespace solsem
