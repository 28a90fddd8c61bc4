#pragma once

#include <cstdint>
#include <optional>

#include "solsem/ast.hpp"
#include "solsem/symbolic.hpp"

// Concrete operator semantics shared by the evaluator and symbolic terms.
// Integer arithmetic is modular at the operand width (two's complement for
// signed types); division and modulo by zero are undefined.

namespace solsem::arith {

std::uint64_t mask(IntType t);
std::uint64_t truncate(IntType t, std::uint64_t bits);
/// Sign-extended value of `bits` interpreted at width t.
std::int64_t as_signed(IntType t, std::uint64_t bits);
std::uint64_t from_signed(IntType t, std::int64_t v);

bool is_arithmetic(BinOp op);
bool is_comparison(BinOp op);
bool is_logical(BinOp op);

/// Operands must have the same kind (and IntType for integers).
std::optional<Scalar> binary(BinOp op, const Scalar& lhs, const Scalar& rhs);
std::optional<Scalar> unary(UnOp op, const Scalar& v);

}  // namespace solsem::arith
