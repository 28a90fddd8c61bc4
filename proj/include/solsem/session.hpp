#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "solsem/engine.hpp"
#include "solsem/frontend.hpp"

// One verification or execution job over a loaded source program: the
// initial state is built from the declarations, the block context, pre-state
// writes, entry arguments and symbolic inputs.

namespace solsem {

/// NAME:kind[:lo..hi], kind being bool, int or uint.
struct SymbolSpec {
  std::string name;
  bool is_bool = false;
  std::optional<std::pair<std::int64_t, std::int64_t>> range;
};
SymbolSpec parse_symbol_spec(const std::string& text);

struct PostClause {
  enum class Kind { Throw, NoThrow, Equals, Unchanged };
  Kind kind = Kind::Throw;
  std::string name;
  std::string value;
};

/// Line-oriented verification job; see the README for the format.
struct SpecFile {
  std::optional<std::string> entry;
  std::optional<std::uint64_t> gas;
  std::optional<std::uint64_t> k;
  std::optional<std::int64_t> sender;
  std::optional<std::int64_t> value;
  std::optional<std::int64_t> timestamp;
  std::optional<Mode> mode;
  std::vector<std::string> pre;
  std::vector<std::string> args;
  std::vector<SymbolSpec> symbols;
  std::vector<std::string> assumptions;
  std::vector<PostClause> post;
  /// function name -> replacement statements
  std::vector<std::pair<std::string, std::string>> summaries;
};
/// Throws FrontendError (with the line number) on malformed input.
SpecFile parse_spec_file(const std::string& text);

struct SessionOptions {
  std::uint64_t gas = 10000;
  std::uint64_t k = 1000;
  std::size_t memory_size = 100;
  std::string entry;
  BlockInfo block{0, 0, 1, 0, 0};
};

struct RunResult {
  RunStatus status = RunStatus::Done;
  bool threw = false;
  std::uint64_t dispatched = 0;
  std::uint64_t gas_left = 0;
  std::string diagnostic;
  std::optional<MemoryState> final_state;
  MemoryState initial{Reserved::count + 1};
};

struct VerifyReport {
  Verdict verdict;
  /// Witness values by symbol name, rendered for display.
  std::vector<std::pair<std::string, std::string>> witness;
};

class Session {
 public:
  explicit Session(SessionOptions opts = {});

  SessionOptions& options() { return opts_; }
  const SessionOptions& options() const { return opts_; }

  /// Parses and binds the source. Throws FrontendError.
  void load_source(const std::string& text);
  bool loaded() const { return program_.has_value(); }
  const Program& program() const;

  /// NAME=VALUE. Entry parameters become call arguments; anything else is a
  /// pre-state assignment.
  void add_arg(const std::string& assignment);
  /// Statements run after the declarations, before σ_init is taken.
  void add_pre(const std::string& statements);
  void add_symbolic(const SymbolSpec& s);
  void add_assumption(const std::string& expression);
  void add_post(const PostClause& p);
  void add_summary(const std::string& function, const std::string& statements);
  void set_mode(Mode m) { mode_ = m; }
  /// Applies every setting of a spec file (options included).
  void apply_spec(const SpecFile& spec);

  /// Declarations, block context and pre-state writes, then symbolic inputs.
  InitialState build_initial() const;
  StmtList entry_program() const;
  ExecConfig exec_config() const;

  RunResult run() const;
  /// Ready-to-step machine for the entry program.
  ExecState begin() const;
  VerifyReport verify() const;
  Postcondition postcondition() const;

 private:
  SessionOptions opts_;
  std::optional<Program> program_;
  std::vector<std::pair<std::string, std::string>> args_;
  std::vector<std::string> pre_;
  std::vector<SymbolSpec> symbols_;
  std::vector<std::string> assumptions_;
  std::vector<PostClause> post_;
  std::vector<std::pair<std::string, std::string>> summaries_;
  Mode mode_ = Mode::Static;

  const FunctionInfo& entry_function() const;
  std::vector<SymbolSpec> active_symbols() const;
  std::vector<SymbolicValue> symbol_values() const;
  VarInfo named_block(const std::string& name) const;
  MemoryState with_block_context(MemoryState mem) const;
};

}  // namespace solsem
