#pragma once

#include <string>

#include "solsem/ast.hpp"

// Tree interchange format for typed ASTs. Every node is an object with a
// "kind" field naming its constructor; addresses are plain block indices and
// absent optionals are null. Expressions carry "types": [source, result] once
// typechecked.

namespace solsem {

std::string ast_to_json(const StmtList& prog, int indent = 2);
/// Throws std::invalid_argument on malformed input.
StmtList ast_from_json(const std::string& text);

std::string type_to_json(const LType& t);
LType type_from_json(const std::string& text);

}  // namespace solsem
