#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "solsem/basic.hpp"

namespace solsem {

/// Fixed-width integer description. Widths run from 8 to 256 in steps of 8;
/// arithmetic is implemented up to 64 bits.
struct IntType {
  std::uint16_t width = 64;
  bool is_signed = false;

  static constexpr IntType i64() { return {64, true}; }
  static constexpr IntType u64() { return {64, false}; }

  bool valid() const { return width >= 8 && width <= 256 && width % 8 == 0; }
  bool arithmetic() const { return width <= 64; }

  friend constexpr bool operator==(const IntType&, const IntType&) = default;
};

std::string to_string(IntType t);

struct LType;

namespace ty {
struct Bool {
  friend bool operator==(const Bool&, const Bool&) = default;
};
struct Int {
  IntType type;
  friend bool operator==(const Int&, const Int&) = default;
};
/// One array dimension; nested arrays stack dimensions outermost first.
struct Array {
  std::uint64_t length = 0;
  Box<LType> element;
  friend bool operator==(const Array&, const Array&) = default;
};
struct Map {
  Box<LType> key;
  Box<LType> value;
  friend bool operator==(const Map&, const Map&) = default;
};
struct Fid {
  std::optional<Address> fn;
  friend bool operator==(const Fid&, const Fid&) = default;
};
struct Struct {
  Address type;
  friend bool operator==(const Struct&, const Struct&) = default;
};
struct Eaddr {
  std::optional<Address> addr;
  friend bool operator==(const Eaddr&, const Eaddr&) = default;
};
struct Unit {
  friend bool operator==(const Unit&, const Unit&) = default;
};
}  // namespace ty

struct LType {
  using Node = std::variant<ty::Bool, ty::Int, ty::Array, ty::Map, ty::Fid, ty::Struct, ty::Eaddr, ty::Unit>;
  Node node = ty::Unit{};

  static LType boolean() { return {ty::Bool{}}; }
  static LType integer(IntType t) { return {ty::Int{t}}; }
  static LType uint64() { return integer(IntType::u64()); }
  static LType int64() { return integer(IntType::i64()); }
  static LType array(std::uint64_t length, LType element) { return {ty::Array{length, std::move(element)}}; }
  /// Builds a[d0][d1]...[dn-1] of `element`.
  static LType array(const std::vector<std::uint64_t>& dims, LType element);
  static LType map(LType key, LType value) { return {ty::Map{std::move(key), std::move(value)}}; }
  static LType fid(std::optional<Address> fn) { return {ty::Fid{fn}}; }
  static LType structure(Address type) { return {ty::Struct{type}}; }
  static LType eaddr(std::optional<Address> a) { return {ty::Eaddr{a}}; }
  static LType unit() { return {ty::Unit{}}; }

  template <class T>
  const T* as() const { return std::get_if<T>(&node); }
  template <class T>
  bool is() const { return std::holds_alternative<T>(node); }

  /// Dimension sizes for array types (outermost first); empty otherwise.
  std::vector<std::uint64_t> dims() const;
  /// The non-array base type of a (possibly nested) array; the type itself otherwise.
  const LType& final_type() const;
  /// Number of nested mapping levels.
  std::size_t map_depth() const;

  friend bool operator==(const LType&, const LType&) = default;
};

std::string to_string(const LType& t);

}  // namespace solsem
