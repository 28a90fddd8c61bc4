#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>

namespace solsem {

/// Index of one block in the formal memory space.
struct Address {
  std::size_t index = 0;

  friend constexpr auto operator<=>(const Address&, const Address&) = default;
};

inline std::string to_string(Address a) { return "@" + std::to_string(a.index); }

enum class Access { Public, Private, Internal };
enum class Occupancy { Occupy, Free };

const char* to_string(Access a);
const char* to_string(Occupancy o);

/// Immutable shared holder with value semantics. Used to break recursion in
/// the AST and memory payloads; equality is structural.
template <class T>
class Box {
 public:
  Box() : ptr_(std::make_shared<const T>()) {}
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}  // NOLINT

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  const T& get() const { return *ptr_; }

  friend bool operator==(const Box& a, const Box& b) {
    return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_;
  }

 private:
  std::shared_ptr<const T> ptr_;
};

}  // namespace solsem

template <>
struct std::hash<solsem::Address> {
  std::size_t operator()(solsem::Address a) const noexcept { return std::hash<std::size_t>{}(a.index); }
};
