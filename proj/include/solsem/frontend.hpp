#pragma once

#include <map>
#include <string>
#include <vector>

#include "solsem/exec.hpp"
#include "solsem/surface.hpp"
#include "solsem/typecheck.hpp"

// Binder: resolves source identifiers to memory addresses and lowers the
// surface tree to typed statements.
//
// Address plan, for memory size N:
//   user region, ascending from 0: per contract its own block, then members
//     in declaration order (a struct type takes 1 block, a state variable
//     1 block or its array size, a function its block followed by its
//     parameters and locals);
//   heap: from the end of the user region up to the lowest return slot;
//   return slots: per function one per return value (one for a modifier),
//     descending from N-8;
//   standard-library blocks: N-7 .. N-1.

namespace solsem {

enum class VarKind { Global, Local, Param, Builtin };

struct VarInfo {
  Address addr;
  LType type;
  VarKind kind = VarKind::Global;
};

struct FunctionInfo {
  std::string name;
  std::string contract;
  Address addr;
  bool is_modifier = false;
  std::vector<Param> params;
  std::vector<LType> returns;
  Address return_slot;
  /// Parameters and locals by name.
  std::map<std::string, VarInfo> scope;
};

struct StructInfo {
  Address addr;
  std::vector<StructMember> members;
};

struct Program {
  std::size_t memory_size = 100;
  /// Contract, struct, variable, modifier and function declarations.
  StmtList declarations;
  std::map<std::string, VarInfo> globals;
  std::map<std::string, FunctionInfo> functions;
  std::map<std::string, StructInfo> structs;
  std::map<std::string, Address> contract_blocks;
  std::vector<std::string> events;
  ContractRegistry registry;
  /// Flat identifier table: globals as "name" and "Contract.name",
  /// parameters and locals as "function.name".
  MemoryState::SymbolTable symbols;
  Address heap_base;
  Address reserved_floor;
  /// Typing context after the declarations.
  TypeContext types;
};

/// Throws FrontendError on binding or typing errors.
Program bind_program(const SourceProgram& source, std::size_t memory_size);
Program load_program(const std::string& text, std::size_t memory_size);

/// Lowers statements in the global scope of the program (globals, `now`,
/// `msg`), typechecked against its declarations.
StmtList bind_statements(const Program& prog, const std::vector<SStmt>& stmts);
/// `hint` types bare integer literals.
LExpr bind_expression(const Program& prog, const SExpr& e, const std::optional<LType>& hint = std::nullopt);

/// The statement that calls `entry` with the given (bound) arguments.
LStatement entry_call(const Program& prog, const std::string& entry, std::vector<LExpr> args = {});

}  // namespace solsem
