#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "solsem/ast.hpp"
#include "solsem/types.hpp"

namespace solsem {

struct SymTerm;

/// Shared reference to an immutable symbolic term; equality is structural.
class Sym {
 public:
  Sym() = default;
  explicit Sym(std::shared_ptr<const SymTerm> t) : term_(std::move(t)) {}

  explicit operator bool() const { return term_ != nullptr; }
  const SymTerm& operator*() const { return *term_; }
  const SymTerm* operator->() const { return term_.get(); }

  friend bool operator==(const Sym& a, const Sym& b);

 private:
  std::shared_ptr<const SymTerm> term_;
};

/// A concrete scalar: either a bit or a fixed-width integer.
struct Scalar {
  bool is_bool = false;
  IntType type;
  std::uint64_t bits = 0;

  static Scalar boolean(bool b) { return {true, {}, b ? 1u : 0u}; }
  static Scalar integer(IntType t, std::uint64_t bits) { return {false, t, bits}; }
  bool truth() const { return bits != 0; }

  friend bool operator==(const Scalar&, const Scalar&) = default;
};

struct SymTerm {
  enum class Kind { Symbol, Const, Binary, Unary };
  Kind kind = Kind::Const;
  std::uint32_t symbol = 0;  // Symbol: index into the declared symbol list
  std::string name;          // Symbol: display name
  Scalar value;              // Const value; for Symbol, the kind/type (bits unused)
  BinOp bop = BinOp::Add;
  UnOp uop = UnOp::Not;
  Sym lhs;
  Sym rhs;

  friend bool operator==(const SymTerm&, const SymTerm&) = default;
};

Sym sym_symbol(std::uint32_t id, std::string name, Scalar shape);
Sym sym_const(Scalar v);
Sym sym_binary(BinOp op, Sym lhs, Sym rhs);
Sym sym_unary(UnOp op, Sym operand);

/// True if the term's value is a boolean.
bool sym_is_bool(const Sym& s);

/// Concrete bits for each declared symbol, indexed by symbol id.
using Assignment = std::vector<std::uint64_t>;

/// Evaluates under a full assignment. Absent when an operation is undefined
/// (division by zero) or a symbol is unassigned.
std::optional<Scalar> evaluate(const Sym& s, const Assignment& assignment);

std::string to_string(const Sym& s);

/// Chooses a branch when execution reaches a condition that depends on
/// symbols. Returning nullopt means neither branch is feasible.
class Decider {
 public:
  virtual ~Decider() = default;
  virtual std::optional<bool> decide(const Sym& condition) = 0;
};

}  // namespace solsem
