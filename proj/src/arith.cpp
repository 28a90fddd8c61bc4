#include "solsem/arith.hpp"

namespace solsem::arith {

std::uint64_t mask(IntType t) {
  return t.width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << t.width) - 1;
}

std::uint64_t truncate(IntType t, std::uint64_t bits) { return bits & mask(t); }

std::int64_t as_signed(IntType t, std::uint64_t bits) {
  bits = truncate(t, bits);
  if (t.width >= 64) return static_cast<std::int64_t>(bits);
  const std::uint64_t sign = std::uint64_t{1} << (t.width - 1);
  if (bits & sign) return static_cast<std::int64_t>(bits | ~mask(t));
  return static_cast<std::int64_t>(bits);
}

std::uint64_t from_signed(IntType t, std::int64_t v) { return truncate(t, static_cast<std::uint64_t>(v)); }

bool is_arithmetic(BinOp op) {
  return op == BinOp::Add || op == BinOp::Sub || op == BinOp::Mul || op == BinOp::Div || op == BinOp::Mod;
}

bool is_comparison(BinOp op) {
  return op == BinOp::Lt || op == BinOp::Gt || op == BinOp::Le || op == BinOp::Ge || op == BinOp::Eq ||
         op == BinOp::Ne;
}

bool is_logical(BinOp op) { return op == BinOp::And || op == BinOp::Or; }

namespace {

std::optional<Scalar> integer_op(BinOp op, IntType t, std::uint64_t a, std::uint64_t b) {
  if (!t.arithmetic()) return std::nullopt;
  a = truncate(t, a);
  b = truncate(t, b);
  switch (op) {
    case BinOp::Add: return Scalar::integer(t, truncate(t, a + b));
    case BinOp::Sub: return Scalar::integer(t, truncate(t, a - b));
    case BinOp::Mul: return Scalar::integer(t, truncate(t, a * b));
    case BinOp::Div:
    case BinOp::Mod: {
      if (b == 0) return std::nullopt;
      if (!t.is_signed) return Scalar::integer(t, op == BinOp::Div ? a / b : a % b);
      const std::int64_t x = as_signed(t, a);
      const std::int64_t y = as_signed(t, b);
      // INT_MIN / -1 wraps to INT_MIN; the remainder is 0.
      if (y == -1) return Scalar::integer(t, op == BinOp::Div ? from_signed(t, 0 - static_cast<std::uint64_t>(x)) : 0);
      return Scalar::integer(t, from_signed(t, op == BinOp::Div ? x / y : x % y));
    }
    case BinOp::Eq: return Scalar::boolean(a == b);
    case BinOp::Ne: return Scalar::boolean(a != b);
    default: break;
  }
  if (t.is_signed) {
    const std::int64_t x = as_signed(t, a);
    const std::int64_t y = as_signed(t, b);
    switch (op) {
      case BinOp::Lt: return Scalar::boolean(x < y);
      case BinOp::Gt: return Scalar::boolean(x > y);
      case BinOp::Le: return Scalar::boolean(x <= y);
      case BinOp::Ge: return Scalar::boolean(x >= y);
      default: return std::nullopt;
    }
  }
  switch (op) {
    case BinOp::Lt: return Scalar::boolean(a < b);
    case BinOp::Gt: return Scalar::boolean(a > b);
    case BinOp::Le: return Scalar::boolean(a <= b);
    case BinOp::Ge: return Scalar::boolean(a >= b);
    default: return std::nullopt;
  }
}

}  // namespace

std::optional<Scalar> binary(BinOp op, const Scalar& lhs, const Scalar& rhs) {
  if (lhs.is_bool != rhs.is_bool) return std::nullopt;
  if (lhs.is_bool) {
    const bool a = lhs.truth();
    const bool b = rhs.truth();
    switch (op) {
      case BinOp::And: return Scalar::boolean(a && b);
      case BinOp::Or: return Scalar::boolean(a || b);
      case BinOp::Eq: return Scalar::boolean(a == b);
      case BinOp::Ne: return Scalar::boolean(a != b);
      default: return std::nullopt;
    }
  }
  if (lhs.type != rhs.type) return std::nullopt;
  return integer_op(op, lhs.type, lhs.bits, rhs.bits);
}

std::optional<Scalar> unary(UnOp op, const Scalar& v) {
  if (op == UnOp::Not) {
    if (!v.is_bool) return std::nullopt;
    return Scalar::boolean(!v.truth());
  }
  if (v.is_bool || !v.type.is_signed || !v.type.arithmetic()) return std::nullopt;
  return Scalar::integer(v.type, truncate(v.type, 0 - v.bits));
}

}  // namespace solsem::arith
