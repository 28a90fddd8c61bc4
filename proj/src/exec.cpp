#include "solsem/exec.hpp"

#include "solsem/arith.hpp"
#include "solsem/expr.hpp"
#include "solsem/value.hpp"

namespace solsem {

bool env_check(const Env& env, const Env& fenv) {
  return env.gas > 0 && !(env.domain == fenv.domain && env.level != fenv.level);
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Running: return "running";
    case RunStatus::Done: return "done";
    case RunStatus::OutOfGas: return "out-of-gas";
    case RunStatus::Failed: return "failed";
    case RunStatus::Pruned: return "pruned";
  }
  return "?";
}

namespace {

// Blocks taken by one element slot of an array whose elements have type t.
std::uint64_t slot_blocks(const LType& element);

std::uint64_t array_blocks(const LType& t) {
  const auto* a = t.as<ty::Array>();
  return a->length * slot_blocks(a->element.get());
}

std::uint64_t slot_blocks(const LType& element) {
  return element.is<ty::Array>() ? 1 + array_blocks(element) : 1;
}

}  // namespace

std::optional<MemoryState> init_array(std::uint64_t k, const MemoryState& mem, Address base, const LType& array_type,
                                      const Env& env, Access access) {
  if (k == 0) return std::nullopt;
  const auto* a = array_type.as<ty::Array>();
  if (!a || a->length == 0) return std::nullopt;
  const LType& element = a->element.get();
  const std::uint64_t slot = slot_blocks(element);
  std::optional<MemoryState> out = mem;
  for (std::uint64_t i = 0; i < a->length && out; ++i) {
    auto at = address_offset(OffsetOp::Add, static_cast<std::int64_t>(i * slot), base, mem.size());
    if (!at) return std::nullopt;
    if (element.is<ty::Array>()) {
      out = write_dir(*out, *at, MemoryValue::make(cell::ArrayHeader{element, i}, env, access));
      if (!out) return std::nullopt;
      auto first = address_offset(OffsetOp::Add, 1, *at, mem.size());
      if (!first) return std::nullopt;
      out = init_array(k - 1, *out, *first, element, env, access);
    } else {
      out = write_dir(*out, *at, MemoryValue::make(default_payload(element, *out), env, access));
    }
  }
  return out;
}

std::optional<MemoryState> init_var(const MemoryState& mem, const Env& env, const BlockInfo&,
                                    std::optional<Access> access, const LType& t, Address a, std::uint64_t k) {
  if (!mem.contains(a) || mem.at(a).occupancy != Occupancy::Free) return std::nullopt;
  const Access acc = access.value_or(Access::Public);
  if (t.is<ty::Array>()) {
    auto reserved = allocate_at(mem, a, array_blocks(t));
    if (!reserved) return std::nullopt;
    return init_array(k, *reserved, a, t, env, acc);
  }
  MemoryValue::Payload payload = default_payload(t, mem);
  if (auto* node = std::get_if<cell::MapNode>(&payload)) node->head = a;
  return write_dir(mem, a, MemoryValue::make(std::move(payload), env, acc));
}

MemoryState throw_state(const MemoryState& initial) {
  const Address flag = initial.reserved().throw_flag;
  MemoryValue v = initial.at(flag);
  v.payload = cell::Bool{true, {}};
  v.occupancy = Occupancy::Occupy;
  return initial.with_block(flag, std::move(v));
}

ExecState start_exec(MemoryState mem, const Env& env, const Env& fenv, const BlockInfo& b,
                     std::shared_ptr<const StmtList> prog) {
  ExecState s;
  s.initial = mem;
  s.mem = std::move(mem);
  s.block = b;
  s.env = env;
  s.fenv = fenv;
  if (prog && !prog->empty()) s.stack.push_back(Cursor{prog, 0, prog->size()});
  return s;
}

ExecState start_exec(MemoryState mem, const Env& env, const Env& fenv, const BlockInfo& b, StmtList prog) {
  return start_exec(std::move(mem), env, fenv, b, std::make_shared<const StmtList>(std::move(prog)));
}

namespace {

// Records whether any decision was reported infeasible, so a failed
// evaluation can be told apart from a pruned branch.
class WatchedDecider : public Decider {
 public:
  explicit WatchedDecider(Decider* inner) : inner_(inner) {}
  std::optional<bool> decide(const Sym& c) override {
    auto r = inner_->decide(c);
    if (!r) infeasible_ = true;
    return r;
  }
  bool infeasible() const { return infeasible_; }

 private:
  Decider* inner_;
  bool infeasible_ = false;
};

void leave_frame(ExecState& s, const FrameExit& f) {
  const std::uint64_t gas = s.env.gas;
  s.env = f.caller_env;
  s.env.gas = gas;
  s.fenv = f.caller_fenv;
  if (!s.mem) return;
  for (Address a : f.locals) {
    if (auto freed = free_mem(*s.mem, a)) s.mem = std::move(freed);
  }
}

void settle(ExecState& s) {
  while (!s.stack.empty()) {
    if (auto* c = std::get_if<Cursor>(&s.stack.back())) {
      if (c->pos < c->end) return;
      s.stack.pop_back();
      continue;
    }
    FrameExit f = std::move(std::get<FrameExit>(s.stack.back()));
    s.stack.pop_back();
    leave_frame(s, f);
  }
}

std::shared_ptr<const StmtList> alias(const std::shared_ptr<const StmtList>& owner, const StmtList& sub) {
  return std::shared_ptr<const StmtList>(owner, &sub);
}

void push_list(ExecState& s, std::shared_ptr<const StmtList> list) {
  if (list && !list->empty()) {
    const std::size_t n = list->size();
    s.stack.push_back(Cursor{std::move(list), 0, n});
  }
}

enum class ModifierOutcome { Proceed, Skip, Abort };

class Dispatcher {
 public:
  Dispatcher(ExecState& s, const ExecConfig& cfg, Decider* decider, std::shared_ptr<const StmtList> owner,
             std::size_t pos)
      : s_(s), cfg_(cfg), watch_(decider), decider_(decider ? &watch_ : nullptr), owner_(std::move(owner)), pos_(pos) {}

  void run(const LStatement& st) { std::visit([this](const auto& node) { exec(node); }, st.node); }

 private:
  ExecState& s_;
  const ExecConfig& cfg_;
  WatchedDecider watch_;
  Decider* decider_;
  std::shared_ptr<const StmtList> owner_;
  std::size_t pos_;

  MemoryState& mem() { return *s_.mem; }

  void fail(const std::string& why) {
    if (decider_ && watch_.infeasible()) {
      s_.status = RunStatus::Pruned;
      return;
    }
    s_.mem.reset();
    s_.status = RunStatus::Failed;
    s_.diagnostic = why;
  }

  bool set_mem(std::optional<MemoryState> m, const std::string& why) {
    if (!m) {
      fail(why);
      return false;
    }
    s_.mem = std::move(m);
    return true;
  }

  Env decl_env(Address domain) const {
    Env e = s_.env;
    e.domain = domain;
    return e;
  }

  std::optional<MemoryValue> rvalue(const LExpr& e) {
    return ese_r(cfg_.k, e, mem(), s_.block, s_.env, decider_);
  }

  std::optional<bool> condition(const LExpr& e) {
    auto v = rvalue(e);
    if (!v) return std::nullopt;
    return decide_truth(*v, decider_);
  }

  void exec(const st::Snil&) {}

  void exec(const st::Throw&) {
    s_.mem = throw_state(s_.initial);
    s_.stack.clear();
    s_.threw = true;
  }

  void exec(const st::FunStop&) {
    const std::uint64_t gas = s_.env.gas;
    s_.env = s_.fenv;
    s_.env.gas = gas;
  }

  void exec(const st::Contract& c) {
    if (cfg_.contracts) {
      auto it = cfg_.contracts->find(c.name);
      if (it != cfg_.contracts->end() && it->second != c.inherits) return;
    }
    set_mem(write_dir(mem(), c.addr,
                      MemoryValue::make(cell::Contract{c.addr, c.members, c.inherits}, decl_env(c.addr))),
            "contract " + c.name + ": block out of range");
  }

  void exec(const st::StructDecl& d) {
    set_mem(write_dir(mem(), d.type, MemoryValue::make(cell::StructType{d.type, d.members}, decl_env(d.type))),
            "struct declaration out of range");
  }

  void exec(const st::Var& v) {
    const auto* var = v.var.as<ex::Var>();
    if (!var || !var->addr) return fail("Var: declaration without an address");
    set_mem(init_var(mem(), s_.env, s_.block, v.access, var->type, *var->addr, cfg_.k),
            "Var: cannot declare " + to_string(*var->addr));
  }

  bool declare_params(const std::vector<Param>& params, const Env& env) {
    for (const auto& p : params) {
      if (!set_mem(init_var(mem(), env, s_.block, Access::Public, p.type, p.addr, cfg_.k),
                   "parameter " + p.name + " cannot be declared"))
        return false;
    }
    return true;
  }

  void exec(const st::Modifier& m) {
    const Env env = decl_env(m.addr);
    if (!declare_params(m.params, env)) return;
    if (!set_mem(init_var(mem(), env, s_.block, Access::Public, LType::boolean(), m.return_slot, cfg_.k),
                 "modifier " + m.name + ": return slot unavailable"))
      return;
    cell::Function info{{LType::boolean()}, m.params, m.return_slot, {}, {}, alias(owner_, m.body)};
    set_mem(write_dir(mem(), m.addr, MemoryValue::make(std::move(info), env)), "modifier " + m.name);
  }

  void exec(const st::Fun& f) {
    const Env env = decl_env(f.addr);
    if (!declare_params(f.params, env)) return;
    for (std::size_t i = 0; i < f.returns.size(); ++i) {
      if (!set_mem(init_var(mem(), env, s_.block, Access::Public, f.returns[i], Address{f.return_slot.index + i},
                            cfg_.k),
                   "function " + f.name + ": return slot unavailable"))
        return;
    }
    cell::Function info{f.returns, f.params, f.return_slot, f.modifiers, f.locals, alias(owner_, f.body)};
    set_mem(write_dir(mem(), f.addr, MemoryValue::make(std::move(info), env)), "function " + f.name);
  }

  void exec(const st::Assign& a) {
    auto rhs = rvalue(a.rhs);
    if (!rhs) return fail("Assign: right-hand side has no value");
    if (const auto* fid = rhs->as<cell::Fid>(); fid && fid->args && a.rhs.as<ex::Const>()) {
      if (a.rhs.as<ex::Const>()->value.as<val::Field>()) return call(*fid, {});
    }
    if (const auto* c = a.lhs.as<ex::Const>()) {
      if (const auto* m = c->value.as<val::Map>()) {
        std::vector<MemoryValue> keys;
        for (const auto& ke : m->keys) {
          auto kv = rvalue(ke);
          if (!kv) return fail("Assign: mapping key has no value");
          keys.push_back(std::move(*kv));
        }
        set_mem(map_store(mem(), m->base, keys, *rhs, s_.env, decider_), "Assign: mapping store failed");
        return;
      }
    }
    auto addr = ese_l(cfg_.k, a.lhs, mem(), s_.block, s_.env, decider_);
    if (!addr) return fail("Assign: left-hand side has no address");
    set_mem(write(mem(), *addr, *rhs, AccessMode::Chck, s_.env, s_.block),
            "Assign: write to " + to_string(*addr) + " rejected");
  }

  std::optional<cell::Function> current_function() {
    auto block = read(mem(), s_.env.domain, AccessMode::Dir, s_.env, s_.block);
    if (!block) return std::nullopt;
    if (const auto* f = block->as<cell::Function>()) return *f;
    return std::nullopt;
  }

  void exec(const st::Return& r) {
    auto v = rvalue(r.value);
    if (!v) return fail("Return: value has no value");
    auto fn = current_function();
    if (!fn) return fail("Return: not inside a function");
    if (!set_mem(write(mem(), fn->return_slot, *v, AccessMode::Chck, s_.env, s_.block), "Return: slot rejected"))
      return;
    s_.env.domain = s_.fenv.domain;
  }

  void exec(const st::Returns& r) {
    std::vector<MemoryValue> values;
    for (const auto& e : r.values) {
      auto v = rvalue(e);
      if (!v) return fail("Returns: value has no value");
      values.push_back(std::move(*v));
    }
    auto fn = current_function();
    if (!fn) return fail("Returns: not inside a function");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!set_mem(write(mem(), Address{fn->return_slot.index + i}, values[i], AccessMode::Chck, s_.env, s_.block),
                   "Returns: slot rejected"))
        return;
    }
    s_.env.domain = s_.fenv.domain;
  }

  void exec(const st::If& i) {
    auto c = condition(i.cond);
    if (!c) return fail("If: condition is not a decidable Bool");
    push_list(s_, alias(owner_, *c ? i.then_branch : i.else_branch));
  }

  void repeat_self() { s_.stack.push_back(Cursor{owner_, pos_, pos_ + 1}); }

  void exec(const st::LoopWhile& w) {
    auto c = condition(w.cond);
    if (!c) return fail("LoopWhile: condition is not a decidable Bool");
    if (!*c) return;
    repeat_self();
    push_list(s_, alias(owner_, w.body));
  }

  void exec(const st::LoopFor& f) {
    if (!f.init->is<st::Snil>()) {
      st::LoopFor rest{f.cond, LStatement{st::Snil{}}, f.body, f.post};
      push_list(s_, std::make_shared<const StmtList>(StmtList{*f.init, LStatement{std::move(rest)}}));
      return;
    }
    auto c = condition(f.cond);
    if (!c) return fail("LoopFor: condition is not a decidable Bool");
    if (!*c) return;
    repeat_self();
    if (!f.post->is<st::Snil>()) push_list(s_, std::make_shared<const StmtList>(StmtList{*f.post}));
    push_list(s_, alias(owner_, f.body));
  }

  void exec(const st::FunCall& fc) {
    cell::Fid target;
    if (const auto* f = fc.callee.as<ex::Fun>()) {
      if (!f->addr) return fail("FunCall: callee without an address");
      target.fn = f->addr;
    } else {
      auto v = rvalue(fc.callee);
      if (!v || !v->is<cell::Fid>()) return fail("FunCall: callee is not a function");
      target = *v->as<cell::Fid>();
    }
    std::vector<MemoryValue> args;
    for (const auto& e : fc.args) {
      auto v = rvalue(e);
      if (!v) return fail("FunCall: argument has no value");
      args.push_back(std::move(*v));
    }
    if (args.empty() && s_.pending_args) {
      args = std::move(*s_.pending_args);
      s_.pending_args.reset();
    }
    call(target, std::move(args));
  }

  bool bind_params(const std::vector<Param>& params, const std::vector<MemoryValue>& args) {
    if (params.size() != args.size()) {
      fail("call: expected " + std::to_string(params.size()) + " arguments, got " + std::to_string(args.size()));
      return false;
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (!value_has_type(args[i], params[i].type)) {
        fail("call: argument " + params[i].name + " has the wrong type");
        return false;
      }
      if (!set_mem(write(mem(), params[i].addr, args[i], AccessMode::Chck, s_.env, s_.block),
                   "call: parameter " + params[i].name + " rejected"))
        return false;
    }
    return true;
  }

  void call(const cell::Fid& target, std::vector<MemoryValue> args) {
    if (!target.fn) return fail("call: function pointer is unset");
    const Address fn = *target.fn;
    std::vector<MemoryValue> all = target.args.value_or(std::vector<MemoryValue>{});
    all.insert(all.end(), std::make_move_iterator(args.begin()), std::make_move_iterator(args.end()));
    if (auto it = cfg_.summaries.find(fn); it != cfg_.summaries.end()) {
      push_list(s_, it->second);
      return;
    }
    if (fn == mem().reserved().send_fn) return builtin_send(target.receiver, all);
    auto block = read(mem(), fn, AccessMode::Chck, s_.env, s_.block);
    if (!block || !block->is<cell::Function>()) return fail("call: " + to_string(fn) + " is not a function");
    const cell::Function info = *block->as<cell::Function>();
    for (const auto& mc : info.modifiers) {
      switch (run_modifier(mc)) {
        case ModifierOutcome::Proceed: break;
        case ModifierOutcome::Skip: return;
        case ModifierOutcome::Abort: return;
      }
    }
    if (!bind_params(info.params, all)) return;
    s_.stack.push_back(FrameExit{s_.env, s_.fenv, info.locals});
    s_.fenv = s_.env;
    s_.env.level += 1;
    s_.env.domain = fn;
    push_list(s_, info.body);
  }

  ModifierOutcome run_modifier(const ModifierCall& mc) {
    auto block = read(mem(), mc.modifier, AccessMode::Chck, s_.env, s_.block);
    if (!block || !block->is<cell::Function>()) {
      fail("modifier " + to_string(mc.modifier) + " is not declared");
      return ModifierOutcome::Abort;
    }
    const cell::Function info = *block->as<cell::Function>();
    std::vector<MemoryValue> args;
    for (const auto& e : mc.args) {
      auto v = rvalue(e);
      if (!v) {
        fail("modifier argument has no value");
        return ModifierOutcome::Abort;
      }
      args.push_back(std::move(*v));
    }
    const MemoryState before = mem();
    const Address flag = before.reserved().modifier_flag;
    MemoryValue cleared = before.at(flag);
    cleared.payload = cell::Bool{false, {}};
    s_.mem = before.with_block(flag, cleared);
    if (!bind_params(info.params, args)) return ModifierOutcome::Abort;
    const MemoryState armed = mem();

    ExecState sub = start_exec(armed, Env{s_.env.gas, s_.env.gas_limit, s_.env.level + 1, mc.modifier}, s_.env,
                               s_.block, info.body);
    sub.initial = s_.initial;
    run_exec(sub, cfg_, decider_);
    s_.env.gas = sub.env.gas;
    switch (sub.status) {
      case RunStatus::Failed:
        fail("modifier: " + sub.diagnostic);
        return ModifierOutcome::Abort;
      case RunStatus::Pruned:
        s_.status = RunStatus::Pruned;
        return ModifierOutcome::Abort;
      case RunStatus::OutOfGas:
        s_.mem = std::move(sub.mem);
        s_.status = RunStatus::OutOfGas;
        return ModifierOutcome::Abort;
      default: break;
    }
    if (sub.threw) {
      s_.mem = std::move(sub.mem);
      s_.stack.clear();
      s_.threw = true;
      return ModifierOutcome::Abort;
    }
    if (modifier_passed(armed, *sub.mem, flag)) {
      s_.mem = std::move(sub.mem);
      return ModifierOutcome::Proceed;
    }
    s_.mem = before;
    return ModifierOutcome::Skip;
  }

  bool modifier_passed(const MemoryState& armed, const MemoryState& after, Address flag) {
    auto raised = decide_truth(after.at(flag), decider_);
    if (!raised || !*raised) return false;
    return armed.with_block(flag, after.at(flag)) == after;
  }

  void builtin_send(const std::optional<Address>& receiver, const std::vector<MemoryValue>& args) {
    if (!receiver || args.size() < 2 || !mem().contains(*receiver)) return;
    MemoryValue block = mem().at(*receiver);
    const auto* inst = block.as<cell::StructInstance>();
    if (!inst || inst->type != mem().reserved().address_type || inst->members.size() < 2) return;
    cell::StructInstance credited = *inst;
    auto* balance = std::get_if<cell::Int>(&credited.members[1].payload);
    if (!balance) return;
    auto amount = concrete_scalar(args[1]);
    if (amount && !amount->is_bool && !balance->sym) {
      const std::uint64_t old = balance->bits.value_or(0);
      balance->bits = arith::truncate(balance->type, old + amount->bits);
    } else {
      balance->bits.reset();
      balance->sym = {};
    }
    block.payload = std::move(credited);
    s_.mem = mem().with_block(*receiver, std::move(block));
  }
};

}  // namespace

const LStatement* next_statement(const ExecState& s) {
  for (auto it = s.stack.rbegin(); it != s.stack.rend(); ++it) {
    if (const auto* c = std::get_if<Cursor>(&*it)) {
      if (c->pos < c->end) return &(*c->list)[c->pos];
    }
  }
  return nullptr;
}

void step_exec(ExecState& s, const ExecConfig& cfg, Decider* decider) {
  if (s.status != RunStatus::Running) return;
  if (!s.mem) {
    s.status = RunStatus::Failed;
    if (s.diagnostic.empty()) s.diagnostic = "no memory state";
    return;
  }
  settle(s);
  if (s.stack.empty()) {
    s.status = RunStatus::Done;
    return;
  }
  if (!env_check(s.env, s.fenv)) {
    if (s.env.gas == 0) {
      s.status = RunStatus::OutOfGas;
      return;
    }
    while (!s.stack.empty()) {
      if (auto* f = std::get_if<FrameExit>(&s.stack.back())) {
        FrameExit exit = std::move(*f);
        s.stack.pop_back();
        leave_frame(s, exit);
        return;
      }
      s.stack.pop_back();
    }
    s.status = RunStatus::Done;
    return;
  }
  Cursor& c = std::get<Cursor>(s.stack.back());
  std::shared_ptr<const StmtList> owner = c.list;
  const std::size_t pos = c.pos++;
  if (c.pos >= c.end) s.stack.pop_back();
  s.env.gas -= 1;
  ++s.dispatched;
  Dispatcher(s, cfg, decider, owner, pos).run((*owner)[pos]);
}

void run_exec(ExecState& s, const ExecConfig& cfg, Decider* decider) {
  while (s.status == RunStatus::Running) step_exec(s, cfg, decider);
}

std::optional<MemoryState> ess(std::uint64_t k, const std::optional<MemoryState>& mem,
                               const std::optional<std::vector<MemoryValue>>& args, const Env& env, const Env& fenv,
                               const StmtList& prog, const BlockInfo& b) {
  if (!mem) return std::nullopt;
  ExecConfig cfg;
  cfg.k = k;
  ExecState s = start_exec(*mem, env, fenv, b, prog);
  s.pending_args = args;
  run_exec(s, cfg);
  if (s.status == RunStatus::Failed) return std::nullopt;
  return s.mem;
}

}  // namespace solsem
