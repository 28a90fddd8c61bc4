#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "solsem/memory.hpp"

namespace solsem {

/// Evaluates e in l-position (to the address it denotes).
std::optional<Address> ese_l(std::uint64_t k, const LExpr& e, const MemoryState& mem, const BlockInfo& b,
                             const Env& env, Decider* decider = nullptr);
/// Evaluates e in r-position (to a memory value).
std::optional<MemoryValue> ese_r(std::uint64_t k, const LExpr& e, const MemoryState& mem, const BlockInfo& b,
                                 const Env& env, Decider* decider = nullptr);

/// Both operands are always evaluated; absent operands propagate. A
/// symbolic divisor is split on `divisor == 0` through the decider.
std::optional<MemoryValue> eval_bop(BinOp op, const std::optional<MemoryValue>& lhs,
                                    const std::optional<MemoryValue>& rhs, Decider* decider = nullptr);
std::optional<MemoryValue> eval_uop(UnOp op, const std::optional<MemoryValue>& v);

/// The bit of a concrete Bool cell.
std::optional<bool> extract_bool(const std::optional<MemoryValue>& v);
/// The statement list of a Function or Body cell.
std::shared_ptr<const StmtList> extract_stt(const std::optional<MemoryValue>& v);

}  // namespace solsem
