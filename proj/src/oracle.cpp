#include "solsem/oracle.hpp"

#include <map>
#include <sstream>

#include "solsem/engine.hpp"

namespace solsem {

namespace {

// Scalar values of the core subset: Bool or int64.
struct OVal {
  bool is_bool = false;
  bool bit = false;
  std::int64_t num = 0;
};

std::int64_t wrap(std::uint64_t bits) { return static_cast<std::int64_t>(bits); }
std::uint64_t raw(std::int64_t v) { return static_cast<std::uint64_t>(v); }

bool visible(const MemoryValue& b, const Env& env) {
  return b.occupancy == Occupancy::Occupy && (b.access == Access::Public || b.domain == env.domain);
}

std::optional<OVal> load(const MemoryState& mem, Address a, const Env& env) {
  if (!mem.contains(a) || !visible(mem.at(a), env)) return std::nullopt;
  const MemoryValue& b = mem.at(a);
  if (const auto* x = b.as<cell::Bool>()) {
    if (!x->bit || x->sym) return std::nullopt;
    return OVal{true, *x->bit, 0};
  }
  if (const auto* x = b.as<cell::Int>()) {
    if (x->type != IntType::i64() || !x->bits || x->sym) return std::nullopt;
    return OVal{false, false, wrap(*x->bits)};
  }
  return std::nullopt;
}

std::optional<OVal> apply(BinOp op, const OVal& l, const OVal& r) {
  if (l.is_bool != r.is_bool) return std::nullopt;
  if (l.is_bool) {
    switch (op) {
      case BinOp::And: return OVal{true, l.bit && r.bit, 0};
      case BinOp::Or: return OVal{true, l.bit || r.bit, 0};
      case BinOp::Eq: return OVal{true, l.bit == r.bit, 0};
      case BinOp::Ne: return OVal{true, l.bit != r.bit, 0};
      default: return std::nullopt;
    }
  }
  const std::int64_t x = l.num, y = r.num;
  auto num = [](std::int64_t v) { return OVal{false, false, v}; };
  auto truth = [](bool b) { return OVal{true, b, 0}; };
  switch (op) {
    case BinOp::Add: return num(wrap(raw(x) + raw(y)));
    case BinOp::Sub: return num(wrap(raw(x) - raw(y)));
    case BinOp::Mul: return num(wrap(raw(x) * raw(y)));
    case BinOp::Div:
      if (y == 0) return std::nullopt;
      if (y == -1) return num(wrap(0 - raw(x)));
      return num(x / y);
    case BinOp::Mod:
      if (y == 0) return std::nullopt;
      if (y == -1) return num(0);
      return num(x % y);
    case BinOp::Lt: return truth(x < y);
    case BinOp::Gt: return truth(x > y);
    case BinOp::Le: return truth(x <= y);
    case BinOp::Ge: return truth(x >= y);
    case BinOp::Eq: return truth(x == y);
    case BinOp::Ne: return truth(x != y);
    default: return std::nullopt;
  }
}

std::optional<OVal> eval(const LExpr& e, const MemoryState& mem, const Env& env) {
  if (const auto* c = e.as<ex::Const>()) {
    if (const auto* b = c->value.as<val::Bool>()) return OVal{true, b->bit, 0};
    if (const auto* i = c->value.as<val::Int>()) {
      if (i->type != IntType::i64()) return std::nullopt;
      return OVal{false, false, wrap(i->bits)};
    }
    return std::nullopt;
  }
  if (const auto* v = e.as<ex::Var>()) return v->addr ? load(mem, *v->addr, env) : std::nullopt;
  if (const auto* b = e.as<ex::Bop>()) {
    const auto l = eval(*b->lhs, mem, env);
    const auto r = eval(*b->rhs, mem, env);
    if (!l || !r) return std::nullopt;
    return apply(b->op, *l, *r);
  }
  if (const auto* u = e.as<ex::Uop>()) {
    const auto v = eval(*u->operand, mem, env);
    if (!v) return std::nullopt;
    if (u->op == UnOp::Not) {
      if (!v->is_bool) return std::nullopt;
      return OVal{true, !v->bit, 0};
    }
    if (v->is_bool) return std::nullopt;
    return OVal{false, false, wrap(0 - raw(v->num))};
  }
  return std::nullopt;
}

MemoryValue::Payload payload_of(const OVal& v) {
  if (v.is_bool) return cell::Bool{v.bit, {}};
  return cell::Int{IntType::i64(), raw(v.num), {}};
}

// Stores v at a keeping the block's ownership: the target must be occupied
// and visible from env.
std::optional<MemoryState> store(const MemoryState& mem, Address a, const OVal& v, const Env& env) {
  if (!mem.contains(a) || !visible(mem.at(a), env)) return std::nullopt;
  MemoryValue next = mem.at(a);
  next.payload = payload_of(v);
  next.level = env.level;
  return mem.with_block(a, std::move(next));
}

// Calls f(statement, owning list, index, path) for every statement reachable
// through If branches and loop bodies.
template <class F>
void visit_tree(const StmtList& list, const std::string& prefix, const F& f) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = prefix + std::to_string(i);
    f(list[i], list, i, path);
    if (const auto* c = list[i].as<st::If>()) {
      visit_tree(c->then_branch, path + "/then/", f);
      visit_tree(c->else_branch, path + "/else/", f);
    } else if (const auto* w = list[i].as<st::LoopWhile>()) {
      visit_tree(w->body, path + "/body/", f);
    }
  }
}

// Machine configuration: continuation frames over statement lists.
struct Frame {
  const StmtList* list;
  std::size_t pos;
  std::size_t end;
};

class Relational {
 public:
  Relational(const MemoryState& mem, const Env& env, const StmtList& prog)
      : initial_(mem), mem_(mem), env_(env) {
    visit_tree(prog, "", [&](const LStatement& s, const StmtList& list, std::size_t i, const std::string& path) {
      positions_[&s] = path;
      origin_[&s] = Frame{&list, i, i + 1};
    });
    if (!prog.empty()) frames_.push_back({&prog, 0, prog.size()});
  }

  RelResult run() {
    while (!halted_ && !frames_.empty() && env_.gas > 0) {
      Frame& f = frames_.back();
      const LStatement& s = (*f.list)[f.pos++];
      if (f.pos >= f.end) frames_.pop_back();
      env_.gas -= 1;
      const char* rule = apply_rule(s);
      trace_.push_back({positions_.at(&s), statement_name(s), rule, mem_});
      if (!mem_) halted_ = true;
    }
    return {mem_, std::move(trace_)};
  }

 private:
  MemoryState initial_;
  std::optional<MemoryState> mem_;
  Env env_;
  std::vector<Frame> frames_;
  RelTrace trace_;
  bool halted_ = false;
  std::map<const LStatement*, std::string> positions_;
  std::map<const LStatement*, Frame> origin_;

  const char* fail(const char* rule) {
    mem_.reset();
    return rule;
  }

  void push(const StmtList& list) {
    if (!list.empty()) frames_.push_back({&list, 0, list.size()});
  }

  const char* apply_rule(const LStatement& s) {
    const MemoryState& m = *mem_;
    if (s.is<st::Snil>()) return "Skip";
    if (const auto* v = s.as<st::Var>()) {
      const auto* var = v->var.as<ex::Var>();
      if (!var || !var->addr || !m.contains(*var->addr)) return fail("Var");
      if (m.at(*var->addr).occupancy != Occupancy::Free) return fail("Var");
      MemoryValue::Payload p;
      if (var->type.is<ty::Bool>()) {
        p = cell::Bool{};
      } else if (const auto* i = var->type.as<ty::Int>(); i && i->type == IntType::i64()) {
        p = cell::Int{IntType::i64(), std::nullopt, {}};
      } else {
        return fail("Var");
      }
      MemoryValue block;
      block.payload = std::move(p);
      block.domain = env_.domain;
      block.level = env_.level;
      block.access = v->access.value_or(Access::Public);
      block.occupancy = Occupancy::Occupy;
      mem_ = m.with_block(*var->addr, std::move(block));
      return "Var";
    }
    if (const auto* a = s.as<st::Assign>()) {
      const auto value = eval(a->rhs, m, env_);
      const auto* target = a->lhs.as<ex::Var>();
      if (!value || !target || !target->addr) return fail("Assign");
      mem_ = store(m, *target->addr, *value, env_);
      return "Assign";
    }
    if (const auto* i = s.as<st::If>()) {
      const auto c = eval(i->cond, m, env_);
      if (!c || !c->is_bool) return fail("If");
      push(c->bit ? i->then_branch : i->else_branch);
      return c->bit ? "If-True" : "If-False";
    }
    if (const auto* w = s.as<st::LoopWhile>()) {
      const auto c = eval(w->cond, m, env_);
      if (!c || !c->is_bool) return fail("While");
      if (!c->bit) return "While-Exit";
      // Re-run the loop statement after the body: a one-statement frame.
      const Frame again = repeat_frame(s);
      if (!again.list) return fail("While");
      frames_.push_back(again);
      push(w->body);
      return "While-Iterate";
    }
    if (s.is<st::Throw>()) {
      MemoryValue flag = initial_.at(initial_.reserved().throw_flag);
      flag.payload = cell::Bool{true, {}};
      flag.occupancy = Occupancy::Occupy;
      mem_ = initial_.with_block(initial_.reserved().throw_flag, std::move(flag));
      frames_.clear();
      halted_ = true;
      return "Throw";
    }
    if (const auto* r = s.as<st::Return>()) {
      const auto value = eval(r->value, m, env_);
      if (!value || !m.contains(env_.domain)) return fail("Return");
      const auto* fn = m.at(env_.domain).as<cell::Function>();
      if (!fn) return fail("Return");
      mem_ = store(m, fn->return_slot, *value, env_);
      halted_ = true;
      return "Return";
    }
    return fail("Unsupported");
  }

  // A loop re-enters itself through a one-statement frame over the list
  // that holds it.
  Frame repeat_frame(const LStatement& s) {
    auto it = origin_.find(&s);
    if (it != origin_.end()) return it->second;
    return Frame{nullptr, 0, 0};
  }
};

}  // namespace

RelResult relational_eval(const MemoryState& mem, const Env& env, const Env& fenv, const StmtList& prog) {
  // fenv only matters for frame exits, which the core subset reaches solely
  // through Return.
  (void)fenv;
  Relational machine(mem, env, prog);
  return machine.run();
}

std::map<const LStatement*, std::string> statement_positions(const StmtList& prog) {
  std::map<const LStatement*, std::string> out;
  visit_tree(prog, "", [&](const LStatement& s, const StmtList&, std::size_t, const std::string& path) {
    out[&s] = path;
  });
  return out;
}

ExecTrace executable_trace(const CoreProgram& p, std::uint64_t k) {
  ExecTrace out;
  // Non-owning alias so statement identities match the caller's tree.
  std::shared_ptr<const StmtList> prog(std::shared_ptr<const StmtList>{}, &p.prog);
  ExecState s = start_exec(p.mem, p.env, p.fenv, {}, prog);
  ExecConfig cfg;
  cfg.k = k;
  const auto positions = statement_positions(p.prog);
  while (s.status == RunStatus::Running) {
    const LStatement* next = next_statement(s);
    const std::uint64_t before = s.dispatched;
    step_exec(s, cfg);
    if (s.dispatched > before && next) {
      auto it = positions.find(next);
      out.trace.push_back({it == positions.end() ? "?" : it->second, statement_name(*next), statement_name(*next), s.mem});
    }
  }
  out.final_state = fether(k, p.mem, p.env, p.fenv, std::nullopt, p.prog);
  return out;
}

namespace {

bool same_optional(const std::optional<MemoryState>& a, const std::optional<MemoryState>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same_payloads(*a, *b);
}

std::string describe(const std::optional<MemoryState>& m) { return m ? "a state" : "no state"; }

std::optional<Divergence> compare(std::size_t index, const RelResult& rel, const ExecTrace& ex) {
  const std::size_t n = std::min(rel.trace.size(), ex.trace.size());
  for (std::size_t i = 0; i < n; ++i) {
    const RelStep& r = rel.trace[i];
    const RelStep& e = ex.trace[i];
    if (r.position != e.position) {
      // Control flow split: blame the statement that chose the successor.
      const std::size_t at = i == 0 ? 0 : i - 1;
      return Divergence{index, at, rel.trace[at].kind,
                        "next statement differs: relational runs " + r.kind + " at " + r.position +
                            ", executable runs " + e.kind + " at " + e.position};
    }
    if (!same_optional(r.state, e.state)) {
      return Divergence{index, i, r.kind,
                        "state after the step differs (" + describe(r.state) + " vs " + describe(e.state) + ")"};
    }
  }
  if (rel.trace.size() != ex.trace.size()) {
    // Failing steps are recorded, so one run stopping early means the last
    // common statement chose a different successor (or none).
    const std::size_t at = n == 0 ? 0 : n - 1;
    const std::string kind = n == 0 ? "start" : rel.trace[at].kind;
    return Divergence{index, at, kind,
                      "trace lengths differ: " + std::to_string(rel.trace.size()) + " vs " +
                          std::to_string(ex.trace.size())};
  }
  if (!same_optional(rel.final_state, ex.final_state)) {
    return Divergence{index, n, "end",
                      "final states differ (" + describe(rel.final_state) + " vs " + describe(ex.final_state) + ")"};
  }
  return std::nullopt;
}

}  // namespace

SimulationReport check_simulation(const std::vector<CoreProgram>& corpus, const Executor& exec) {
  SimulationReport report;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const CoreProgram& p = corpus[i];
    const RelResult rel = relational_eval(p.mem, p.env, p.fenv, p.prog);
    const ExecTrace ex = exec ? exec(p) : executable_trace(p);
    if (auto d = compare(i, rel, ex)) report.divergences.push_back(std::move(*d));
    ++report.checked;
  }
  return report;
}

std::string render_report(const SimulationReport& r) {
  std::ostringstream out;
  out << "checked " << r.checked << " programs, " << r.divergences.size() << " divergences\n";
  for (const auto& d : r.divergences)
    out << "program " << d.program << " step " << d.step << " (" << d.statement << "): " << d.detail << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Generator

namespace {

Env frame_env() {
  Env env;
  env.level = 1;
  env.domain = Address{core_layout::function};
  return env;
}

class Generator {
 public:
  Generator(std::mt19937_64& rng, const CoreGenOptions& opts) : rng_(rng), opts_(opts) {}

  std::int64_t between(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_); }
  bool chance(int percent) { return between(0, 99) < percent; }

  LExpr int_var() { return make_var(Address{static_cast<std::size_t>(between(0, core_layout::int_vars - 1))}, LType::int64()); }
  LExpr bool_var() {
    return make_var(Address{core_layout::bool_base + static_cast<std::size_t>(between(0, core_layout::bool_vars - 1))},
                    LType::boolean());
  }
  LExpr int_const() { return make_int(between(opts_.min_int, opts_.max_int), IntType::i64()); }

  LExpr int_expr(int depth) {
    if (depth <= 0 || chance(35)) return chance(50) ? int_const() : int_var();
    if (chance(10)) return make_uop(UnOp::Neg, int_expr(depth - 1));
    static constexpr BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod};
    return make_bop(ops[between(0, 4)], int_expr(depth - 1), int_expr(depth - 1));
  }

  LExpr bool_expr(int depth) {
    if (depth <= 0 || chance(25)) return chance(40) ? make_bool(chance(50)) : bool_var();
    const auto pick = between(0, 9);
    if (pick < 5) {
      static constexpr BinOp cmp[] = {BinOp::Lt, BinOp::Gt, BinOp::Le, BinOp::Ge, BinOp::Eq, BinOp::Ne};
      return make_bop(cmp[between(0, 5)], int_expr(depth - 1), int_expr(depth - 1));
    }
    if (pick < 8) return make_bop(chance(50) ? BinOp::And : BinOp::Or, bool_expr(depth - 1), bool_expr(depth - 1));
    if (pick < 9) return make_uop(UnOp::Not, bool_expr(depth - 1));
    return make_bop(chance(50) ? BinOp::Eq : BinOp::Ne, bool_expr(depth - 1), bool_expr(depth - 1));
  }

  StmtList block(int depth, std::size_t loops) {
    StmtList out;
    const auto n = static_cast<std::size_t>(between(1, static_cast<std::int64_t>(opts_.max_block_len)));
    for (std::size_t i = 0; i < n; ++i) statement(depth, loops, out);
    return out;
  }

  void statement(int depth, std::size_t loops, StmtList& out) {
    const auto pick = between(0, 99);
    const bool nest = depth > 1;
    if (pick < 30 || (!nest && pick < 60)) {
      out.push_back(LStatement{st::Assign{int_var(), int_expr(3)}});
    } else if (pick < 45 || (!nest && pick < 85)) {
      out.push_back(LStatement{st::Assign{bool_var(), bool_expr(3)}});
    } else if (pick < 65 && nest) {
      out.push_back(LStatement{st::If{bool_expr(3), block(depth - 1, loops), chance(80) ? block(depth - 1, loops) : StmtList{}}});
    } else if (pick < 78 && nest && loops < core_layout::counters) {
      const LExpr counter = make_var(Address{core_layout::counter_base + loops}, LType::int64());
      out.push_back(LStatement{st::Assign{counter, make_int(0, IntType::i64())}});
      LExpr cond = make_bop(BinOp::Lt, counter, make_int(between(0, opts_.max_loop_bound), IntType::i64()));
      if (chance(25)) cond = make_bop(BinOp::And, std::move(cond), bool_expr(2));
      StmtList body = block(depth - 1, loops + 1);
      body.push_back(LStatement{st::Assign{counter, make_bop(BinOp::Add, counter, make_int(1, IntType::i64()))}});
      out.push_back(LStatement{st::LoopWhile{std::move(cond), std::move(body)}});
    } else if (pick < 88) {
      out.push_back(LStatement{st::Snil{}});
    } else if (pick < 92) {
      out.push_back(LStatement{st::Throw{}});
    } else if (pick < 97) {
      out.push_back(LStatement{st::Return{int_expr(2)}});
    } else {
      // Redeclaring a live variable fails in both semantics.
      out.push_back(LStatement{st::Var{Access::Public, int_var()}});
    }
  }

 private:
  std::mt19937_64& rng_;
  CoreGenOptions opts_;
};

}  // namespace

MemoryState core_memory() {
  using namespace core_layout;
  MemoryState mem = init_mem(memory_size, standard_library(memory_size))
                        .with_layout(Address{return_slot + 1}, Address{memory_size - Reserved::count - 1});
  Env owner;
  owner.domain = Address{function};
  cell::Function fn{{LType::int64()}, {}, Address{return_slot}, {}, {}, std::make_shared<const StmtList>()};
  mem = mem.with_block(Address{function}, MemoryValue::make(std::move(fn), owner));
  mem = mem.with_block(Address{return_slot},
                       MemoryValue::make(cell::Int{IntType::i64(), std::nullopt, {}}, owner, Access::Public));
  return mem;
}

StmtList core_prelude(std::mt19937_64& rng, const CoreGenOptions& opts) {
  using namespace core_layout;
  Generator g(rng, opts);
  StmtList out;
  auto access = [&] { return g.chance(30) ? Access::Private : Access::Public; };
  for (std::size_t i = 0; i < int_vars; ++i) {
    const LExpr v = make_var(Address{i}, LType::int64());
    out.push_back(LStatement{st::Var{access(), v}});
    out.push_back(LStatement{st::Assign{v, g.int_const()}});
  }
  for (std::size_t i = 0; i < bool_vars; ++i) {
    const LExpr v = make_var(Address{bool_base + i}, LType::boolean());
    out.push_back(LStatement{st::Var{access(), v}});
    out.push_back(LStatement{st::Assign{v, make_bool(g.chance(50))}});
  }
  for (std::size_t i = 0; i < counters; ++i)
    out.push_back(LStatement{st::Var{Access::Public, make_var(Address{counter_base + i}, LType::int64())}});
  return out;
}

StmtList random_core_statements(std::mt19937_64& rng, const CoreGenOptions& opts) {
  Generator g(rng, opts);
  return g.block(opts.max_depth, 0);
}

CoreProgram random_core_program(std::mt19937_64& rng, const CoreGenOptions& opts) {
  CoreProgram p;
  p.mem = core_memory();
  p.env = frame_env();
  p.fenv = Env{};
  p.prog = core_prelude(rng, opts);
  for (auto& s : random_core_statements(rng, opts)) p.prog.push_back(std::move(s));
  const auto gas = std::uniform_int_distribution<std::uint64_t>(opts.min_gas, opts.max_gas)(rng);
  p.env.gas = p.env.gas_limit = gas;
  p.fenv.gas = p.fenv.gas_limit = gas;
  return p;
}

std::vector<CoreProgram> random_core_corpus(std::uint64_t seed, std::size_t count, const CoreGenOptions& opts) {
  std::mt19937_64 rng(seed);
  std::vector<CoreProgram> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_core_program(rng, opts));
  return out;
}

TypeContext core_type_context() {
  using namespace core_layout;
  TypeContext ctx = TypeContext::with_stdlib(memory_size);
  for (std::size_t i = 0; i < int_vars; ++i) ctx.variables[Address{i}] = LType::int64();
  for (std::size_t i = 0; i < bool_vars; ++i) ctx.variables[Address{bool_base + i}] = LType::boolean();
  for (std::size_t i = 0; i < counters; ++i) ctx.variables[Address{counter_base + i}] = LType::int64();
  ctx.returns = std::vector<LType>{LType::int64()};
  return ctx;
}

}  // namespace solsem
