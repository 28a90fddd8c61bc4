#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "solsem/exec.hpp"

namespace solsem {

/// Runs prog to completion from σ. Gas exhaustion returns the state reached
/// so far; any failing step returns absent.
std::optional<MemoryState> fether(std::uint64_t k, const std::optional<MemoryState>& mem, const Env& env,
                                  const Env& fenv, const std::optional<std::vector<MemoryValue>>& args,
                                  const StmtList& prog, const BlockInfo& b = {}, const ExecConfig& cfg = {});

/// A symbol with a finite inclusive domain. Ids index assignments, so the
/// symbols of one exploration must be numbered 0..n-1.
struct SymbolicValue {
  std::uint32_t id = 0;
  std::string name;
  Scalar shape;
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  Sym term() const { return sym_symbol(id, name, shape); }
};

/// One execution branch: machine state plus the branch decisions taken and
/// the conditions they imply.
struct PathState {
  ExecState exec;
  std::vector<Sym> path_condition;
  std::vector<bool> decisions;
  /// First assignment satisfying the path condition, once explored.
  std::optional<Assignment> witness;
};

/// Executes exactly one statement of a concrete path.
PathState step(const PathState& ps, const ExecConfig& cfg = {});

/// Enumerates assignments over the product of the symbol domains, keeping
/// those that satisfy every assumption.
class Enumerator {
 public:
  Enumerator(std::vector<SymbolicValue> symbols, std::vector<Sym> assumptions);

  /// Product of the domain sizes (saturating).
  std::uint64_t space() const;
  bool satisfies(const Assignment& a, const std::vector<Sym>& conditions) const;
  std::optional<Assignment> first_model(const std::vector<Sym>& conditions) const;
  /// Calls f on each model in enumeration order until it returns false.
  void for_each_model(const std::vector<Sym>& conditions, const std::function<bool(const Assignment&)>& f) const;

  const std::vector<SymbolicValue>& symbols() const { return symbols_; }

 private:
  std::vector<SymbolicValue> symbols_;
  std::vector<Sym> assumptions_;
};

/// Replaces every symbolic cell by its value under the assignment.
MemoryState concretize(const MemoryState& mem, const Assignment& a);

/// Depth-first exploration of every feasible branch. Returns the terminal
/// paths ordered by their decision sequences.
std::vector<PathState> explore(const PathState& initial, const std::vector<SymbolicValue>& symbols,
                               const std::vector<Sym>& assumptions, const ExecConfig& cfg = {});

enum class Mode { Static, Concolic, Selective };
enum class VerdictStatus { Verified, Refuted, Exhausted, Error };
const char* to_string(Mode m);
const char* to_string(VerdictStatus s);

struct Verdict {
  VerdictStatus status = VerdictStatus::Verified;
  std::string diagnostic;
  std::size_t paths = 0;
  std::optional<PathState> counterexample;
  std::optional<Assignment> witness;
};

struct InitialState {
  MemoryState mem;
  Env env;
  Env fenv;
  BlockInfo block;
};

using PreBuilder = std::function<std::optional<InitialState>()>;
/// Judges a concrete final state against the concrete initial state.
using Postcondition = std::function<bool(const MemoryState& final_state, const MemoryState& initial_state)>;

struct VerifyOptions {
  Mode mode = Mode::Static;
  std::vector<SymbolicValue> symbols;
  std::vector<Sym> assumptions;
  ExecConfig exec;
  /// Selective mode: function -> replacement statements.
  std::map<Address, std::shared_ptr<const StmtList>> summaries;
  std::size_t summary_samples = 32;
};

/// P{σ} prog Q: explores prog from the state built by pre and checks post
/// on every model of every terminal path.
Verdict verify_triple(const PreBuilder& pre, const StmtList& prog, const Postcondition& post,
                      const VerifyOptions& opts);

/// Checks a summary against its function by running both concretely on up
/// to `samples` models. Returns a description of the first disagreement.
std::optional<std::string> check_summary(const InitialState& init, Address function, const StmtList& summary,
                                         const Enumerator& models, const ExecConfig& cfg, std::size_t samples);

}  // namespace solsem
