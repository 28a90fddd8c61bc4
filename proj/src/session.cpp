#include <algorithm>

#include "solsem/arith.hpp"
#include "solsem/expr.hpp"
#include "solsem/session.hpp"
#include "solsem/value.hpp"

namespace solsem {

namespace {

// Budget for running the declarations and pre-state writes.
constexpr std::uint64_t kSetupGas = 1'000'000;

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw FrontendError({}, "argument must look like NAME=VALUE: " + text);
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  std::pair<std::string, std::string> out{trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
  if (out.first.empty() || out.second.empty()) throw FrontendError({}, "argument must look like NAME=VALUE: " + text);
  return out;
}

std::optional<Scalar> shape_of(const LType& t) {
  if (t.is<ty::Bool>()) return Scalar::boolean(false);
  if (const auto* i = t.as<ty::Int>()) {
    if (!i->type.arithmetic()) return std::nullopt;
    return Scalar::integer(i->type, 0);
  }
  return std::nullopt;
}

std::string render_scalar(const Scalar& s) {
  if (s.is_bool) return s.truth() ? "true" : "false";
  if (s.type.is_signed) return std::to_string(arith::as_signed(s.type, s.bits));
  return std::to_string(s.bits);
}

}  // namespace

Session::Session(SessionOptions opts) : opts_(std::move(opts)) {}

void Session::load_source(const std::string& text) { program_ = load_program(text, opts_.memory_size); }

const Program& Session::program() const {
  if (!program_) throw FrontendError({}, "no source loaded");
  return *program_;
}

void Session::add_arg(const std::string& assignment) { args_.push_back(split_assignment(assignment)); }
void Session::add_pre(const std::string& statements) { pre_.push_back(statements); }
void Session::add_symbolic(const SymbolSpec& s) { symbols_.push_back(s); }
void Session::add_assumption(const std::string& expression) { assumptions_.push_back(expression); }
void Session::add_post(const PostClause& p) { post_.push_back(p); }
void Session::add_summary(const std::string& function, const std::string& statements) {
  summaries_.emplace_back(function, statements);
}

void Session::apply_spec(const SpecFile& spec) {
  if (spec.entry) opts_.entry = *spec.entry;
  if (spec.gas) opts_.gas = *spec.gas;
  if (spec.k) opts_.k = *spec.k;
  if (spec.sender) opts_.block.sender = *spec.sender;
  if (spec.value) opts_.block.value = *spec.value;
  if (spec.timestamp) opts_.block.timestamp = *spec.timestamp;
  if (spec.mode) mode_ = *spec.mode;
  for (const auto& p : spec.pre) add_pre(p);
  for (const auto& a : spec.args) add_arg(a);
  for (const auto& s : spec.symbols) add_symbolic(s);
  for (const auto& a : spec.assumptions) add_assumption(a);
  for (const auto& p : spec.post) add_post(p);
  for (const auto& [f, body] : spec.summaries) add_summary(f, body);
}

const FunctionInfo& Session::entry_function() const {
  const Program& p = program();
  auto it = p.functions.find(opts_.entry);
  if (it == p.functions.end() || it->second.is_modifier) throw FrontendError({}, "no function named " + opts_.entry);
  return it->second;
}

VarInfo Session::named_block(const std::string& name) const {
  const Program& p = program();
  const auto dot = name.find('.');
  if (dot != std::string::npos) {
    const std::string head = name.substr(0, dot);
    const std::string tail = name.substr(dot + 1);
    if (auto f = p.functions.find(head); f != p.functions.end()) {
      if (auto v = f->second.scope.find(tail); v != f->second.scope.end()) return v->second;
    }
    if (p.contract_blocks.count(head)) {
      if (auto g = p.globals.find(tail); g != p.globals.end()) return g->second;
    }
    throw FrontendError({}, "unknown name " + name);
  }
  if (auto g = p.globals.find(name); g != p.globals.end()) return g->second;
  if (!opts_.entry.empty()) {
    const auto& scope = entry_function().scope;
    if (auto v = scope.find(name); v != scope.end()) return v->second;
  }
  throw FrontendError({}, "unknown name " + name);
}

std::vector<SymbolSpec> Session::active_symbols() const {
  std::vector<SymbolSpec> out;
  for (const auto& s : symbols_) {
    const bool concrete = std::any_of(args_.begin(), args_.end(), [&](const auto& a) { return a.first == s.name; });
    if (mode_ == Mode::Concolic && concrete) continue;
    out.push_back(s);
  }
  return out;
}

std::vector<SymbolicValue> Session::symbol_values() const {
  std::vector<SymbolicValue> out;
  for (const auto& s : active_symbols()) {
    const VarInfo info = named_block(s.name);
    const auto shape = shape_of(info.type);
    if (!shape) throw FrontendError({}, "symbol " + s.name + " must name a bool or integer block");
    if (shape->is_bool != s.is_bool)
      throw FrontendError({}, "symbol " + s.name + " declared " + (s.is_bool ? "bool" : "int") + " but the block holds " +
                                  to_string(info.type));
    SymbolicValue v;
    v.id = static_cast<std::uint32_t>(out.size());
    v.name = s.name;
    v.shape = *shape;
    if (s.is_bool) {
      v.lo = s.range ? s.range->first : 0;
      v.hi = s.range ? s.range->second : 1;
      if (v.lo < 0 || v.hi > 1) throw FrontendError({}, "bool symbol " + s.name + " needs a range within 0..1");
    } else {
      if (!s.range) throw FrontendError({}, "integer symbol " + s.name + " needs a range lo..hi");
      v.lo = s.range->first;
      v.hi = s.range->second;
      if (!shape->type.is_signed && v.lo < 0)
        throw FrontendError({}, "symbol " + s.name + " is unsigned but its range is negative");
    }
    out.push_back(std::move(v));
  }
  return out;
}

MemoryState Session::with_block_context(MemoryState mem) const {
  const Reserved& r = mem.reserved();
  Env sys;
  const BlockInfo& b = opts_.block;
  sys.domain = r.msg;
  const auto i64 = [](std::int64_t v) { return cell::Int{IntType::i64(), arith::from_signed(IntType::i64(), v), {}}; };
  const auto u64 = [](std::int64_t v) { return cell::Int{IntType::u64(), static_cast<std::uint64_t>(v), {}}; };
  const auto member = [&](MemoryValue::Payload p) { return MemoryValue::make(std::move(p), sys); };
  cell::StructInstance sender{r.address_type,
                              {member(i64(b.sender)), member(i64(0)),
                               member(cell::Fid{r.send_fn, std::nullopt, std::nullopt}), member(i64(0))}};
  cell::StructInstance msg{r.msg_type, {member(std::move(sender)), member(u64(b.value)), member(u64(b.gas_price))}};
  mem = mem.with_block(r.msg, MemoryValue::make(std::move(msg), sys));
  sys.domain = r.now;
  mem = mem.with_block(r.now, MemoryValue::make(u64(b.timestamp), sys));
  return mem;
}

InitialState Session::build_initial() const {
  const Program& p = program();
  const std::size_t n = p.memory_size;
  MemoryState mem = init_mem(n, standard_library(n)).with_layout(p.heap_base, p.reserved_floor).with_symbols(p.symbols);
  mem = with_block_context(std::move(mem));

  const FunctionInfo* entry = opts_.entry.empty() ? nullptr : &entry_function();
  Env setup;
  setup.gas = setup.gas_limit = kSetupGas;
  if (entry) {
    setup.domain = p.contract_blocks.at(entry->contract);
  } else if (!p.contract_blocks.empty()) {
    setup.domain = p.contract_blocks.begin()->second;
  }

  StmtList prog = p.declarations;
  for (const auto& text : pre_) {
    for (auto& s : bind_statements(p, parse_statements(text))) prog.push_back(std::move(s));
  }
  for (const auto& [name, value] : args_) {
    if (entry && entry->scope.count(name) && entry->scope.at(name).kind == VarKind::Param) continue;
    for (auto& s : bind_statements(p, parse_statements(name + " = " + value + ";"))) prog.push_back(std::move(s));
  }
  ExecConfig cfg = exec_config();
  ExecState s = start_exec(mem, setup, setup, opts_.block, std::move(prog));
  run_exec(s, cfg);
  if (s.status != RunStatus::Done || s.threw || !s.mem)
    throw FrontendError({}, "setup failed (" + std::string(to_string(s.status)) + "): " +
                                (s.threw ? "pre-state statements threw" : s.diagnostic));
  mem = *s.mem;

  for (const auto& v : symbol_values()) {
    const Address a = named_block(v.name).addr;
    mem = mem.with_block(a, symbolic_cell(v.term(), v.shape, mem.at(a)));
  }

  Env env;
  env.gas = env.gas_limit = opts_.gas;
  env.domain = setup.domain;
  return InitialState{std::move(mem), env, env, opts_.block};
}

StmtList Session::entry_program() const {
  if (opts_.entry.empty()) return {};
  const Program& p = program();
  const FunctionInfo& f = entry_function();
  std::vector<LExpr> args;
  for (const auto& prm : f.params) {
    auto it = std::find_if(args_.begin(), args_.end(), [&](const auto& a) { return a.first == prm.name; });
    if (it == args_.end()) {
      // The parameter block carries the default value or a symbolic input.
      args.push_back(LExpr{ex::Par{prm.addr, prm.type}, std::nullopt});
    } else {
      args.push_back(bind_expression(p, parse_expression(it->second), prm.type));
    }
  }
  return {entry_call(p, opts_.entry, std::move(args))};
}

ExecConfig Session::exec_config() const {
  ExecConfig cfg;
  cfg.k = opts_.k;
  cfg.contracts = std::make_shared<const ContractRegistry>(program().registry);
  return cfg;
}

RunResult Session::run() const {
  const InitialState init = build_initial();
  ExecState s = start_exec(init.mem, init.env, init.fenv, init.block, entry_program());
  run_exec(s, exec_config());
  RunResult r;
  r.status = s.status;
  r.threw = s.threw;
  r.dispatched = s.dispatched;
  r.gas_left = s.env.gas;
  r.diagnostic = s.diagnostic;
  r.final_state = s.mem;
  r.initial = s.initial;
  return r;
}

ExecState Session::begin() const {
  const InitialState init = build_initial();
  return start_exec(init.mem, init.env, init.fenv, init.block, entry_program());
}

Postcondition Session::postcondition() const {
  struct Check {
    PostClause::Kind kind;
    Address addr;
    std::optional<MemoryValue> expected;
  };
  const Program& p = program();
  std::vector<Check> checks;
  for (const auto& clause : post_) {
    Check c{clause.kind, {}, std::nullopt};
    if (clause.kind == PostClause::Kind::Equals || clause.kind == PostClause::Kind::Unchanged) {
      const VarInfo info = named_block(clause.name);
      c.addr = info.addr;
      if (clause.kind == PostClause::Kind::Equals) {
        const LExpr e = bind_expression(p, parse_expression(clause.value), info.type);
        const MemoryState scratch(p.memory_size);
        c.expected = ese_r(opts_.k, e, scratch, opts_.block, Env{});
        if (!c.expected || !concrete_scalar(*c.expected))
          throw FrontendError({}, "post equals " + clause.name + ": value must be a literal");
      }
    }
    checks.push_back(std::move(c));
  }
  return [checks](const MemoryState& final_state, const MemoryState& initial) {
    for (const auto& c : checks) {
      switch (c.kind) {
        case PostClause::Kind::Throw:
          if (!same_payloads(final_state, throw_state(initial))) return false;
          break;
        case PostClause::Kind::NoThrow: {
          const auto* flag = final_state.at(final_state.reserved().throw_flag).as<cell::Bool>();
          if (!flag || flag->bit != std::optional<bool>(false)) return false;
          break;
        }
        case PostClause::Kind::Equals: {
          const auto got = concrete_scalar(final_state.at(c.addr));
          if (!got || *got != *concrete_scalar(*c.expected)) return false;
          break;
        }
        case PostClause::Kind::Unchanged:
          if (!same_payload(final_state.at(c.addr), initial.at(c.addr))) return false;
          break;
      }
    }
    return true;
  };
}

VerifyReport Session::verify() const {
  const Program& p = program();
  const InitialState init = build_initial();
  VerifyOptions opts;
  opts.mode = mode_;
  opts.symbols = symbol_values();
  opts.exec = exec_config();
  for (const auto& text : assumptions_) {
    const LExpr e = bind_expression(p, parse_expression(text), LType::boolean());
    const auto v = ese_r(opts_.k, e, init.mem, init.block, init.env);
    Sym term = v ? scalar_term(*v) : Sym{};
    if (!term || !sym_is_bool(term)) throw FrontendError({}, "assumption is not a boolean: " + text);
    opts.assumptions.push_back(std::move(term));
  }
  for (const auto& [name, text] : summaries_) {
    auto it = p.functions.find(name);
    if (it == p.functions.end() || it->second.is_modifier) throw FrontendError({}, "summary for unknown function " + name);
    opts.summaries[it->second.addr] = std::make_shared<const StmtList>(bind_statements(p, parse_statements(text)));
  }
  VerifyReport report;
  report.verdict = verify_triple([init]() -> std::optional<InitialState> { return init; }, entry_program(),
                                 postcondition(), opts);
  if (report.verdict.witness) {
    for (const auto& s : opts.symbols) {
      Scalar v = s.shape;
      v.bits = report.verdict.witness->at(s.id);
      report.witness.emplace_back(s.name, render_scalar(v));
    }
  }
  return report;
}

}  // namespace solsem
