#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "solsem/memory.hpp"
#include "solsem/typecheck.hpp"

// Independent small-step semantics for the core statement subset (Var,
// Assign, If, LoopWhile, Snil, Throw, Return over Bool and int64 scalars).
// It shares only the block store with the executable interpreter so that
// agreement between the two is a meaningful check.

namespace solsem {

struct RelStep {
  /// Position of the executed statement in the program tree, e.g. "3/else/0".
  std::string position;
  /// Statement kind ("If", "Assign", ...).
  std::string kind;
  /// Rule applied, e.g. "If-False".
  std::string rule;
  std::optional<MemoryState> state;
};
using RelTrace = std::vector<RelStep>;

struct RelResult {
  std::optional<MemoryState> final_state;
  RelTrace trace;
};

/// Absent final state on any failing step. Runs out of gas like the
/// executable machine: one unit per executed statement.
RelResult relational_eval(const MemoryState& mem, const Env& env, const Env& fenv, const StmtList& prog);

struct CoreProgram {
  MemoryState mem{Reserved::count + 1};
  Env env;
  Env fenv;
  StmtList prog;
};

/// The executable interpreter's run of one program, with the state after
/// every dispatched statement.
struct ExecTrace {
  std::optional<MemoryState> final_state;
  RelTrace trace;
};
using Executor = std::function<ExecTrace(const CoreProgram&)>;
ExecTrace executable_trace(const CoreProgram& p, std::uint64_t k = 1000);

struct Divergence {
  std::size_t program = 0;
  /// Index of the first trace step at which the runs part ways.
  std::size_t step = 0;
  std::string statement;
  std::string detail;
};

struct SimulationReport {
  std::size_t checked = 0;
  std::vector<Divergence> divergences;
  bool ok() const { return divergences.empty(); }
};

SimulationReport check_simulation(const std::vector<CoreProgram>& corpus, const Executor& exec = {});

/// Random core programs over a 64-block memory: int64 variables at blocks
/// 0..3, Bool variables at 4..5, loop counters at 6..9, and a function
/// frame at block 10 whose return slot is block 11.
struct CoreGenOptions {
  int max_depth = 5;
  std::int64_t min_int = -8;
  std::int64_t max_int = 8;
  std::int64_t max_loop_bound = 4;
  std::size_t max_block_len = 4;
  std::uint64_t min_gas = 8;
  std::uint64_t max_gas = 4000;
};

namespace core_layout {
constexpr std::size_t memory_size = 64;
constexpr std::size_t int_vars = 4;
constexpr std::size_t bool_base = 4;
constexpr std::size_t bool_vars = 2;
constexpr std::size_t counter_base = 6;
constexpr std::size_t counters = 4;
constexpr std::size_t function = 10;
constexpr std::size_t return_slot = 11;
}  // namespace core_layout

/// Memory with the function frame installed and no variables declared.
MemoryState core_memory();
/// Statements declaring and initializing every core variable.
StmtList core_prelude(std::mt19937_64& rng, const CoreGenOptions& opts = {});
/// A random statement list (without the prelude).
StmtList random_core_statements(std::mt19937_64& rng, const CoreGenOptions& opts = {});
CoreProgram random_core_program(std::mt19937_64& rng, const CoreGenOptions& opts = {});
std::vector<CoreProgram> random_core_corpus(std::uint64_t seed, std::size_t count, const CoreGenOptions& opts = {});

/// Typing context describing the core variables and the frame's return type.
TypeContext core_type_context();

/// Tree position of every statement reachable through If and loop bodies.
std::map<const LStatement*, std::string> statement_positions(const StmtList& prog);

/// Text report, one line per divergence.
std::string render_report(const SimulationReport& r);

}  // namespace solsem
