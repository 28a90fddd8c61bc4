#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "solsem/layout.hpp"
#include "solsem/memory.hpp"

// Statement layer. A program runs on a small machine whose continuation is
// a stack of statement-list cursors; the statement executed next is always
// the head of the innermost unfinished list.

namespace solsem {

/// True while gas remains and the current frame has not returned, that is
/// unless env and fenv name the same domain at different call levels.
bool env_check(const Env& env, const Env& fenv);

/// Depth-first initialization of an array allocated at base: each sub-array
/// gets a header block followed by its elements; leaves hold default values.
std::optional<MemoryState> init_array(std::uint64_t k, const MemoryState& mem, Address base, const LType& array_type,
                                      const Env& env, Access access = Access::Public);

/// Declares a variable of type t at a (which must be free).
std::optional<MemoryState> init_var(const MemoryState& mem, const Env& env, const BlockInfo& b,
                                    std::optional<Access> access, const LType& t, Address a, std::uint64_t k = 1000);

/// Contract name -> inheritance list, consulted by contract declarations.
using ContractRegistry = std::map<std::string, std::vector<Address>>;

struct ExecConfig {
  std::uint64_t k = 1000;
  std::shared_ptr<const ContractRegistry> contracts;
  /// Calls to these functions run the mapped statements in place instead.
  std::map<Address, std::shared_ptr<const StmtList>> summaries;
};

struct Cursor {
  std::shared_ptr<const StmtList> list;
  std::size_t pos = 0;
  std::size_t end = 0;
};

/// Marks the end of a called function's body.
struct FrameExit {
  Env caller_env;
  Env caller_fenv;
  std::vector<Address> locals;
};

using ContItem = std::variant<Cursor, FrameExit>;

enum class RunStatus { Running, Done, OutOfGas, Failed, Pruned };
const char* to_string(RunStatus s);

struct ExecState {
  std::optional<MemoryState> mem;
  /// Restored (with the throw flag set) by Throw.
  MemoryState initial{Reserved::count + 1};
  BlockInfo block;
  Env env;
  Env fenv;
  std::vector<ContItem> stack;
  RunStatus status = RunStatus::Running;
  bool threw = false;
  std::uint64_t dispatched = 0;
  /// Arguments for the first call that supplies none of its own.
  std::optional<std::vector<MemoryValue>> pending_args;
  std::string diagnostic;
};

ExecState start_exec(MemoryState mem, const Env& env, const Env& fenv, const BlockInfo& b, StmtList prog);
ExecState start_exec(MemoryState mem, const Env& env, const Env& fenv, const BlockInfo& b,
                     std::shared_ptr<const StmtList> prog);

/// The statement the next step would dispatch, if any.
const LStatement* next_statement(const ExecState& s);

/// Dispatches at most one statement (1 gas). Symbolic branch points are
/// resolved through the decider; without one they fail the run.
void step_exec(ExecState& s, const ExecConfig& cfg, Decider* decider = nullptr);
void run_exec(ExecState& s, const ExecConfig& cfg, Decider* decider = nullptr);

/// Runs prog from σ. `args`, when present, are bound to the parameters of
/// the first function called. Absent input or any failing step gives absent.
std::optional<MemoryState> ess(std::uint64_t k, const std::optional<MemoryState>& mem,
                               const std::optional<std::vector<MemoryValue>>& args, const Env& env, const Env& fenv,
                               const StmtList& prog, const BlockInfo& b = {});

/// σ_init with the throw flag raised.
MemoryState throw_state(const MemoryState& initial);

}  // namespace solsem
