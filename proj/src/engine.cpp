#include "solsem/engine.hpp"

#include <algorithm>
#include <limits>

#include "solsem/arith.hpp"

namespace solsem {

std::optional<MemoryState> fether(std::uint64_t k, const std::optional<MemoryState>& mem, const Env& env,
                                  const Env& fenv, const std::optional<std::vector<MemoryValue>>& args,
                                  const StmtList& prog, const BlockInfo& b, const ExecConfig& cfg) {
  if (!mem) return std::nullopt;
  ExecConfig run_cfg = cfg;
  run_cfg.k = k;
  ExecState s = start_exec(*mem, env, fenv, b, prog);
  s.pending_args = args;
  run_exec(s, run_cfg);
  if (s.status == RunStatus::Failed) return std::nullopt;
  return s.mem;
}

PathState step(const PathState& ps, const ExecConfig& cfg) {
  PathState next = ps;
  step_exec(next.exec, cfg);
  return next;
}

Enumerator::Enumerator(std::vector<SymbolicValue> symbols, std::vector<Sym> assumptions)
    : symbols_(std::move(symbols)), assumptions_(std::move(assumptions)) {}

std::uint64_t Enumerator::space() const {
  std::uint64_t total = 1;
  for (const auto& s : symbols_) {
    if (s.hi < s.lo) return 0;
    const auto width = static_cast<std::uint64_t>(s.hi - s.lo) + 1;
    if (total > std::numeric_limits<std::uint64_t>::max() / width) return std::numeric_limits<std::uint64_t>::max();
    total *= width;
  }
  return total;
}

namespace {
bool holds(const Sym& c, const Assignment& a) {
  auto v = evaluate(c, a);
  return v && v->is_bool && v->truth();
}
}  // namespace

bool Enumerator::satisfies(const Assignment& a, const std::vector<Sym>& conditions) const {
  for (const auto& c : assumptions_)
    if (!holds(c, a)) return false;
  for (const auto& c : conditions)
    if (!holds(c, a)) return false;
  return true;
}

void Enumerator::for_each_model(const std::vector<Sym>& conditions,
                                const std::function<bool(const Assignment&)>& f) const {
  const std::size_t n = symbols_.size();
  for (const auto& s : symbols_)
    if (s.hi < s.lo) return;
  std::vector<std::int64_t> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = symbols_[i].lo;
  Assignment a(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = symbols_[i];
      a[s.id] = s.shape.is_bool ? (values[i] != 0 ? 1 : 0) : arith::from_signed(s.shape.type, values[i]);
    }
    if (satisfies(a, conditions) && !f(a)) return;
    std::size_t i = 0;
    while (i < n && values[i] == symbols_[i].hi) {
      values[i] = symbols_[i].lo;
      ++i;
    }
    if (i == n) return;
    ++values[i];
  }
}

std::optional<Assignment> Enumerator::first_model(const std::vector<Sym>& conditions) const {
  std::optional<Assignment> found;
  for_each_model(conditions, [&](const Assignment& a) {
    found = a;
    return false;
  });
  return found;
}

namespace {

MemoryValue concretize_value(const MemoryValue& v, const Assignment& a);

void concretize_all(std::vector<MemoryValue>& values, const Assignment& a) {
  for (auto& v : values) v = concretize_value(v, a);
}

MemoryValue concretize_value(const MemoryValue& v, const Assignment& a) {
  MemoryValue out = v;
  if (auto* b = std::get_if<cell::Bool>(&out.payload)) {
    if (b->sym) {
      auto r = evaluate(b->sym, a);
      b->bit = r ? std::optional<bool>(r->truth()) : std::nullopt;
      b->sym = {};
    }
  } else if (auto* i = std::get_if<cell::Int>(&out.payload)) {
    if (i->sym) {
      auto r = evaluate(i->sym, a);
      i->bits = r ? std::optional<std::uint64_t>(r->bits) : std::nullopt;
      i->sym = {};
    }
  } else if (auto* s = std::get_if<cell::StructInstance>(&out.payload)) {
    concretize_all(s->members, a);
  } else if (auto* f = std::get_if<cell::Fid>(&out.payload)) {
    if (f->args) concretize_all(*f->args, a);
  } else if (auto* m = std::get_if<cell::MapNode>(&out.payload)) {
    if (m->entry) {
      m->entry->first = concretize_value(m->entry->first.get(), a);
      m->entry->second = concretize_value(m->entry->second.get(), a);
    }
  }
  return out;
}

bool has_symbols(const MemoryValue& v) {
  if (const auto* b = v.as<cell::Bool>()) return static_cast<bool>(b->sym);
  if (const auto* i = v.as<cell::Int>()) return static_cast<bool>(i->sym);
  if (const auto* s = v.as<cell::StructInstance>())
    return std::any_of(s->members.begin(), s->members.end(), has_symbols);
  if (const auto* f = v.as<cell::Fid>())
    return f->args && std::any_of(f->args->begin(), f->args->end(), has_symbols);
  if (const auto* m = v.as<cell::MapNode>())
    return m->entry && (has_symbols(m->entry->first.get()) || has_symbols(m->entry->second.get()));
  return false;
}

}  // namespace

MemoryState concretize(const MemoryState& mem, const Assignment& a) {
  MemoryState out = mem;
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const MemoryValue& v = mem.at({i});
    if (has_symbols(v)) out = out.with_block({i}, concretize_value(v, a));
  }
  return out;
}

namespace {

// Follows a recorded decision prefix, then takes `true` at every new
// branch point whose two sides are both feasible and queues the other side.
class ReplayDecider : public Decider {
 public:
  ReplayDecider(const Enumerator& models, std::vector<bool> prefix, PathState& path,
                std::vector<std::vector<bool>>& pending)
      : models_(models), prefix_(std::move(prefix)), path_(path), pending_(pending) {}

  std::optional<bool> decide(const Sym& c) override {
    const std::size_t j = path_.decisions.size();
    const Sym negated = sym_unary(UnOp::Not, c);
    bool choice;
    if (j < prefix_.size()) {
      choice = prefix_[j];
    } else {
      auto with = path_.path_condition;
      with.push_back(c);
      const bool can_true = models_.first_model(with).has_value();
      with.back() = negated;
      const bool can_false = models_.first_model(with).has_value();
      if (!can_true && !can_false) return std::nullopt;
      if (can_true && can_false) {
        auto other = path_.decisions;
        other.push_back(false);
        pending_.push_back(std::move(other));
      }
      choice = can_true;
    }
    path_.path_condition.push_back(choice ? c : negated);
    path_.decisions.push_back(choice);
    return choice;
  }

 private:
  const Enumerator& models_;
  std::vector<bool> prefix_;
  PathState& path_;
  std::vector<std::vector<bool>>& pending_;
};

}  // namespace

std::vector<PathState> explore(const PathState& initial, const std::vector<SymbolicValue>& symbols,
                               const std::vector<Sym>& assumptions, const ExecConfig& cfg) {
  const Enumerator models(symbols, assumptions);
  std::vector<PathState> done;
  if (!models.first_model(initial.path_condition)) return done;
  std::vector<std::vector<bool>> pending{{}};
  while (!pending.empty()) {
    std::vector<bool> prefix = std::move(pending.back());
    pending.pop_back();
    PathState path = initial;
    ReplayDecider decider(models, std::move(prefix), path, pending);
    run_exec(path.exec, cfg, &decider);
    if (path.exec.status == RunStatus::Pruned) continue;
    path.witness = models.first_model(path.path_condition);
    if (!path.witness) continue;
    done.push_back(std::move(path));
  }
  std::sort(done.begin(), done.end(),
            [](const PathState& a, const PathState& b) { return a.decisions < b.decisions; });
  return done;
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Static: return "static";
    case Mode::Concolic: return "concolic";
    case Mode::Selective: return "selective";
  }
  return "?";
}

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Verified: return "verified";
    case VerdictStatus::Refuted: return "refuted";
    case VerdictStatus::Exhausted: return "exhausted";
    case VerdictStatus::Error: return "error";
  }
  return "?";
}

std::optional<std::string> check_summary(const InitialState& init, Address function, const StmtList& summary,
                                         const Enumerator& models, const ExecConfig& cfg, std::size_t samples) {
  if (!init.mem.contains(function)) return "summary target " + to_string(function) + " is outside memory";
  const auto* fn = init.mem.at(function).as<cell::Function>();
  if (!fn) return "summary target " + to_string(function) + " is not a declared function";
  if (!fn->params.empty()) return "summaries are only accepted for functions without parameters";
  std::vector<Assignment> all;
  models.for_each_model({}, [&](const Assignment& a) {
    all.push_back(a);
    return all.size() < 4096;
  });
  if (all.empty()) return std::nullopt;
  const std::size_t count = std::min(samples, all.size());
  ExecConfig plain = cfg;
  plain.summaries.clear();
  const StmtList call{LStatement{st::FunCall{LExpr{ex::Fun{function, LType::unit()}, std::nullopt}, {}}}};
  for (std::size_t n = 0; n < count; ++n) {
    const Assignment& a = all[n * all.size() / count];
    const MemoryState start = concretize(init.mem, a);
    ExecState original = start_exec(start, init.env, init.fenv, init.block, call);
    ExecState replaced = start_exec(start, init.env, init.fenv, init.block, summary);
    run_exec(original, plain);
    run_exec(replaced, plain);
    const bool same_status = original.status == replaced.status;
    const bool same_state = original.mem.has_value() == replaced.mem.has_value() &&
                            (!original.mem || same_payloads(*original.mem, *replaced.mem));
    if (!same_status || !same_state) {
      std::string where;
      for (std::size_t i = 0; i < a.size(); ++i) where += (i ? "," : "") + std::to_string(a[i]);
      return "summary for " + to_string(function) + " disagrees with the function on sample [" + where + "]";
    }
  }
  return std::nullopt;
}

Verdict verify_triple(const PreBuilder& pre, const StmtList& prog, const Postcondition& post,
                      const VerifyOptions& opts) {
  Verdict verdict;
  auto init = pre();
  if (!init) {
    verdict.status = VerdictStatus::Error;
    verdict.diagnostic = "precondition could not build an initial state";
    return verdict;
  }
  const Enumerator models(opts.symbols, opts.assumptions);
  ExecConfig cfg = opts.exec;
  if (opts.mode == Mode::Selective) {
    for (const auto& [fn, body] : opts.summaries) {
      if (auto problem = check_summary(*init, fn, *body, models, cfg, opts.summary_samples)) {
        verdict.status = VerdictStatus::Error;
        verdict.diagnostic = *problem;
        return verdict;
      }
      cfg.summaries[fn] = body;
    }
  }
  PathState start;
  start.exec = start_exec(init->mem, init->env, init->fenv, init->block, prog);
  const auto paths = explore(start, opts.symbols, opts.assumptions, cfg);
  verdict.paths = paths.size();

  std::optional<Verdict> error;
  std::optional<Verdict> exhausted;
  for (const auto& path : paths) {
    if (path.exec.status == RunStatus::Failed) {
      if (!error) {
        error = Verdict{VerdictStatus::Error, path.exec.diagnostic, paths.size(), path, path.witness};
      }
      continue;
    }
    if (path.exec.status == RunStatus::OutOfGas) {
      if (!exhausted) {
        exhausted = Verdict{VerdictStatus::Exhausted, "gas exhausted before the program finished", paths.size(), path,
                            path.witness};
      }
      continue;
    }
    std::optional<Assignment> bad;
    models.for_each_model(path.path_condition, [&](const Assignment& a) {
      if (post(concretize(*path.exec.mem, a), concretize(path.exec.initial, a))) return true;
      bad = a;
      return false;
    });
    if (bad) {
      return Verdict{VerdictStatus::Refuted, "postcondition fails", paths.size(), path, bad};
    }
  }
  if (error) return *error;
  if (exhausted) return *exhausted;
  return verdict;
}

}  // namespace solsem
