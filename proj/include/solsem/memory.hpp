#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "solsem/ast.hpp"
#include "solsem/env.hpp"
#include "solsem/symbolic.hpp"

namespace solsem {

struct MemoryValue;

namespace cell {
struct Undef {
  friend bool operator==(const Undef&, const Undef&) = default;
};
/// `bit` empty and `sym` null means declared but not yet assigned.
struct Bool {
  std::optional<bool> bit;
  Sym sym;
  friend bool operator==(const Bool&, const Bool&) = default;
};
struct Int {
  IntType type;
  std::optional<std::uint64_t> bits;
  Sym sym;
  friend bool operator==(const Int&, const Int&) = default;
};
/// Function pointer. A receiver-bound pointer produced by field access
/// carries the receiver value as the first element of `args`.
struct Fid {
  std::optional<Address> fn;
  std::optional<Address> receiver;
  std::optional<std::vector<MemoryValue>> args;
  friend bool operator==(const Fid&, const Fid&);
};
struct Contract {
  Address contract;
  std::vector<std::pair<std::string, Address>> members;
  std::vector<Address> inherits;
  friend bool operator==(const Contract&, const Contract&) = default;
};
struct StructType {
  Address type;
  std::vector<StructMember> members;
  friend bool operator==(const StructType&, const StructType&) = default;
};
struct StructInstance {
  Address type;
  std::vector<MemoryValue> members;
  friend bool operator==(const StructInstance&, const StructInstance&);
};
/// One node of a mapping chain. The declared mapping block is the chain head
/// and carries no entry. For nested mappings an entry's value is itself an
/// inline head (a MapNode) whose `next` starts the inner chain.
struct MapNode {
  Address head;
  std::optional<std::pair<Box<MemoryValue>, Box<MemoryValue>>> entry;
  LType key_type;
  LType value_type;
  std::optional<Address> next;
  friend bool operator==(const MapNode&, const MapNode&) = default;
};
struct Function {
  std::vector<LType> returns;
  std::vector<Param> params;
  Address return_slot;
  std::vector<ModifierCall> modifiers;
  std::vector<Address> locals;
  std::shared_ptr<const StmtList> body;
  friend bool operator==(const Function&, const Function&);
};
struct Body {
  std::shared_ptr<const StmtList> body;
  friend bool operator==(const Body&, const Body&);
};
/// Group header written by array initialization; `group_type` is the type of
/// the sub-array this header heads.
struct ArrayHeader {
  LType group_type;
  std::uint64_t index = 0;
  friend bool operator==(const ArrayHeader&, const ArrayHeader&) = default;
};
}  // namespace cell

struct MemoryValue {
  using Payload = std::variant<cell::Undef, cell::Bool, cell::Int, cell::Fid, cell::Contract, cell::StructType,
                               cell::StructInstance, cell::MapNode, cell::Function, cell::Body, cell::ArrayHeader>;
  Payload payload = cell::Undef{};
  Address domain;
  std::uint32_t level = 0;
  Access access = Access::Public;
  Occupancy occupancy = Occupancy::Free;

  template <class T>
  const T* as() const { return std::get_if<T>(&payload); }
  template <class T>
  bool is() const { return std::holds_alternative<T>(payload); }

  static MemoryValue free_block() { return {}; }
  /// An occupied block tagged with the given environment.
  static MemoryValue make(Payload p, const Env& env, Access access = Access::Public);

  friend bool operator==(const MemoryValue&, const MemoryValue&) = default;
};

/// Payload-only equality (metadata ignored).
bool same_payload(const MemoryValue& a, const MemoryValue& b);

/// Stable one-line rendering of a payload, used by memory dumps.
std::string render_payload(const MemoryValue::Payload& p);

enum class AccessMode { Dir, Chck };

/// Addresses of the standard-library blocks at the top of the address space.
struct Reserved {
  Address throw_flag;
  Address modifier_flag;
  Address address_type;
  Address msg_type;
  Address send_fn;
  Address msg;
  Address now;

  static constexpr std::size_t count = 7;
  static Reserved for_size(std::size_t memory_size);
};

/// Fixed-size block store with value semantics: every update returns a new
/// state and never touches the receiver. Blocks are shared between snapshots.
class MemoryState {
 public:
  using SymbolTable = std::map<std::string, Address>;

  explicit MemoryState(std::size_t size);

  std::size_t size() const { return blocks_.size(); }
  bool contains(Address a) const { return a.index < blocks_.size(); }
  const MemoryValue& at(Address a) const { return *blocks_.at(a.index); }

  const Reserved& reserved() const { return reserved_; }
  /// First address of the reserved region (stdlib blocks and return slots).
  Address reserved_floor() const { return reserved_floor_; }
  bool is_reserved(Address a) const { return a.index >= reserved_floor_.index && a.index < size(); }
  /// Allocation searches [heap_base, reserved_floor).
  Address heap_base() const { return heap_base_; }

  MemoryState with_block(Address a, MemoryValue v) const;
  MemoryState with_layout(Address heap_base, Address reserved_floor) const;
  MemoryState with_symbols(SymbolTable table) const;

  const SymbolTable& symbols() const;
  std::optional<Address> lookup(const std::string& name) const;

  friend bool operator==(const MemoryState& a, const MemoryState& b);

 private:
  std::vector<std::shared_ptr<const MemoryValue>> blocks_;
  Reserved reserved_;
  Address reserved_floor_;
  Address heap_base_;
  std::shared_ptr<const SymbolTable> symbols_;
};

/// Block-wise payload equality of two states (metadata ignored).
bool same_payloads(const MemoryState& a, const MemoryState& b);

/// Validation predicate for checked access: the block is occupied and either
/// public or owned by the current domain.
bool access_permitted(const MemoryValue& block, const Env& env);

std::optional<MemoryValue> read(const MemoryState& mem, Address a, AccessMode mode, const Env& env,
                                const BlockInfo& block);
inline std::optional<MemoryValue> read_dir(const MemoryState& mem, Address a) {
  return read(mem, a, AccessMode::Dir, {}, {});
}

/// Dir replaces the block wholesale. Chck requires an occupied, permitted
/// block and keeps its ownership metadata (domain, access), replacing the
/// payload and level.
std::optional<MemoryState> write(const MemoryState& mem, Address a, const MemoryValue& v, AccessMode mode,
                                 const Env& env, const BlockInfo& block);
inline std::optional<MemoryState> write_dir(const MemoryState& mem, Address a, const MemoryValue& v) {
  return write(mem, a, v, AccessMode::Dir, {}, {});
}

enum class OffsetOp { Add, Sub };
std::optional<Address> address_offset(OffsetOp op, std::int64_t offset, Address a, std::size_t memory_size);

/// First-fit: the lowest run of n contiguous free blocks in the heap region,
/// marked occupied.
std::optional<std::pair<Address, MemoryState>> allocate(const MemoryState& mem, std::size_t n);
/// Marks [base, base+n) occupied; absent unless every block is free and
/// outside the reserved region.
std::optional<MemoryState> allocate_at(const MemoryState& mem, Address base, std::size_t n);
std::optional<MemoryState> free_mem(const MemoryState& mem, Address a);

/// Fresh memory of `size` blocks with the standard library installed.
/// Throws std::invalid_argument when size cannot hold the reserved blocks.
MemoryState init_mem(std::size_t size, const StmtList& stdlib);

/// Struct declarations of the standard library: the address and msg types.
StmtList standard_library(std::size_t memory_size);

/// One line per block: index, occupancy, access, domain, payload (tab separated).
std::string dump(const MemoryState& mem);
std::string dump_line(const MemoryState& mem, Address a);

}  // namespace solsem
