#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "solsem/memory.hpp"

// Value layer: turns AST values into memory values. Evaluation never
// modifies the memory state; map_store is the only writer and is used by
// assignments.

namespace solsem {

/// Concrete scalar held by a Bool or Int cell. Absent for symbolic,
/// unassigned or non-scalar cells.
std::optional<Scalar> concrete_scalar(const MemoryValue& v);
/// Term for a Bool or Int cell; concrete cells become constants. Null when
/// the cell is not a defined scalar.
Sym scalar_term(const MemoryValue& v);
/// A Bool or Int cell holding `s`, with metadata copied from `tag`.
MemoryValue scalar_cell(const Scalar& s, const MemoryValue& tag);
/// Like scalar_cell but holding a term whose shape is `shape`.
MemoryValue symbolic_cell(const Sym& term, const Scalar& shape, const MemoryValue& tag);

/// Truth of a Bool cell. Symbolic conditions go to the decider; without one
/// they are undecidable and yield absent.
std::optional<bool> decide_truth(const MemoryValue& v, Decider* decider);
/// Concrete index in [0, bound) of an Int cell; absent when out of range.
std::optional<std::uint64_t> concretize_index(const MemoryValue& v, std::uint64_t bound, Decider* decider);
/// Payload equality that ignores metadata at every nesting level.
std::optional<bool> payload_equal(const MemoryValue& a, const MemoryValue& b, Decider* decider);

/// Default payload for a freshly declared variable of type t (arrays and
/// mappings excepted, see init_var).
MemoryValue::Payload default_payload(const LType& t, const MemoryState& mem);
/// Whether the payload kind (and integer type or struct type) matches t.
bool value_has_type(const MemoryValue& v, const LType& t);

std::optional<MemoryValue> esv(std::uint64_t k, const LValue& v, const MemoryState& mem, const BlockInfo& b,
                               const Env& env, Decider* decider = nullptr);

/// Address of element `path` of the array declared with `array_type` at base.
std::optional<Address> id_search(const LType& array_type, Address base, const std::vector<std::uint64_t>& path,
                                 const MemoryState& mem, const Env& env);

/// Node in the chain headed at `base` whose key equals `key`.
std::optional<Address> id_map(const MemoryValue& key, Address base, const LType& key_type, const LType& value_type,
                              const MemoryState& mem, const Env& env, Decider* decider = nullptr);
/// Resolves m[k0][k1]...: each further key searches the chain stored inline
/// in the previous node's value.
std::optional<Address> id_map_path(const std::vector<MemoryValue>& keys, Address base, const MemoryState& mem,
                                   const Env& env, Decider* decider = nullptr);
/// Writes m[k0]...[kn] = value, inserting missing nodes (allocated from the
/// heap, linked at the front of their chain).
std::optional<MemoryState> map_store(const MemoryState& mem, Address base, const std::vector<MemoryValue>& keys,
                                     const MemoryValue& value, const Env& env, Decider* decider = nullptr);

/// head.m0.m1...; a function-pointer member comes back with its receiver
/// bound as the first argument, followed by `args`.
std::optional<MemoryValue> resolve_field(Address head, const std::vector<std::string>& members,
                                         const std::optional<std::vector<MemoryValue>>& args, const MemoryState& mem,
                                         const Env& env, const BlockInfo& b);

}  // namespace solsem
