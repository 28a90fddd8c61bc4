#include "solsem/symbolic.hpp"

#include "solsem/arith.hpp"

namespace solsem {

bool operator==(const Sym& a, const Sym& b) {
  if (a.term_ == b.term_) return true;
  if (!a.term_ || !b.term_) return false;
  return *a.term_ == *b.term_;
}

Sym sym_symbol(std::uint32_t id, std::string name, Scalar shape) {
  SymTerm t;
  t.kind = SymTerm::Kind::Symbol;
  t.symbol = id;
  t.name = std::move(name);
  t.value = shape;
  t.value.bits = 0;
  return Sym(std::make_shared<const SymTerm>(std::move(t)));
}

Sym sym_const(Scalar v) {
  SymTerm t;
  t.kind = SymTerm::Kind::Const;
  t.value = v;
  return Sym(std::make_shared<const SymTerm>(std::move(t)));
}

Sym sym_binary(BinOp op, Sym lhs, Sym rhs) {
  SymTerm t;
  t.kind = SymTerm::Kind::Binary;
  t.bop = op;
  // The result shape is recorded so later operators can type-check.
  t.value = lhs->value;
  if (arith::is_comparison(op) || arith::is_logical(op)) t.value = Scalar::boolean(false);
  t.value.bits = 0;
  t.lhs = std::move(lhs);
  t.rhs = std::move(rhs);
  return Sym(std::make_shared<const SymTerm>(std::move(t)));
}

Sym sym_unary(UnOp op, Sym operand) {
  SymTerm t;
  t.kind = SymTerm::Kind::Unary;
  t.uop = op;
  t.value = operand->value;
  t.value.bits = 0;
  t.lhs = std::move(operand);
  return Sym(std::make_shared<const SymTerm>(std::move(t)));
}

bool sym_is_bool(const Sym& s) { return s && s->value.is_bool; }

std::optional<Scalar> evaluate(const Sym& s, const Assignment& assignment) {
  if (!s) return std::nullopt;
  switch (s->kind) {
    case SymTerm::Kind::Const: return s->value;
    case SymTerm::Kind::Symbol: {
      if (s->symbol >= assignment.size()) return std::nullopt;
      Scalar v = s->value;
      v.bits = v.is_bool ? (assignment[s->symbol] != 0 ? 1 : 0) : arith::truncate(v.type, assignment[s->symbol]);
      return v;
    }
    case SymTerm::Kind::Binary: {
      auto a = evaluate(s->lhs, assignment);
      auto b = evaluate(s->rhs, assignment);
      if (!a || !b) return std::nullopt;
      return arith::binary(s->bop, *a, *b);
    }
    case SymTerm::Kind::Unary: {
      auto a = evaluate(s->lhs, assignment);
      if (!a) return std::nullopt;
      return arith::unary(s->uop, *a);
    }
  }
  return std::nullopt;
}

std::string to_string(const Sym& s) {
  if (!s) return "?";
  switch (s->kind) {
    case SymTerm::Kind::Symbol: return s->name;
    case SymTerm::Kind::Const:
      if (s->value.is_bool) return s->value.truth() ? "true" : "false";
      if (s->value.type.is_signed) return std::to_string(arith::as_signed(s->value.type, s->value.bits));
      return std::to_string(s->value.bits);
    case SymTerm::Kind::Binary:
      return "(" + to_string(s->lhs) + " " + solsem::to_string(s->bop) + " " + to_string(s->rhs) + ")";
    case SymTerm::Kind::Unary: return std::string(solsem::to_string(s->uop)) + to_string(s->lhs);
  }
  return "?";
}

}  // namespace solsem
