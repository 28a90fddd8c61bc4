#include <doctest.h>

#include <set>

#include "solsem/arith.hpp"
#include "solsem/engine.hpp"
#include "solsem/oracle.hpp"
#include "solsem/value.hpp"

using namespace solsem;

namespace {

constexpr Address kX{0};
constexpr Address kS{1};
constexpr Address kFlag{4};

LExpr x() { return make_var(kX, LType::int64()); }
LExpr s() { return make_var(kS, LType::int64()); }
LExpr flag() { return make_var(kFlag, LType::boolean()); }
LExpr i(std::int64_t v) { return make_int(v, IntType::i64()); }
LStatement assign(LExpr l, LExpr r) { return LStatement{st::Assign{std::move(l), std::move(r)}}; }

Env frame_env() {
  Env e;
  e.gas = e.gas_limit = 200;
  e.level = 1;
  e.domain = Address{core_layout::function};
  return e;
}

Scalar int_shape() { return Scalar::integer(IntType::i64(), 0); }

// x, s declared; s and flag hold the symbols given.
InitialState initial(bool symbolic_flag) {
  InitialState init{core_memory(), frame_env(), frame_env(), {}};
  init.fenv.level = 0;
  init.fenv.domain = Address{0};
  for (Address a : {kX, kS}) {
    init.mem = init.mem.with_block(a, MemoryValue::make(cell::Int{IntType::i64(), 0, {}}, init.env));
  }
  init.mem = init.mem.with_block(kFlag, MemoryValue::make(cell::Bool{false, {}}, init.env));
  const MemoryValue tag = init.mem.at(kS);
  init.mem = init.mem.with_block(kS, symbolic_cell(sym_symbol(0, "s", int_shape()), int_shape(), tag));
  if (symbolic_flag) {
    const MemoryValue ftag = init.mem.at(kFlag);
    init.mem = init.mem.with_block(
        kFlag, symbolic_cell(sym_symbol(1, "flag", Scalar::boolean(false)), Scalar::boolean(false), ftag));
  }
  return init;
}

std::vector<SymbolicValue> symbols(bool with_flag, std::int64_t hi = 5) {
  std::vector<SymbolicValue> out{SymbolicValue{0, "s", int_shape(), 0, hi}};
  if (with_flag) out.push_back(SymbolicValue{1, "flag", Scalar::boolean(false), 0, 1});
  return out;
}

std::int64_t x_of(const MemoryState& m) {
  auto v = concrete_scalar(m.at(kX));
  REQUIRE(v);
  return arith::as_signed(v->type, v->bits);
}

Postcondition x_at_most(std::int64_t bound) {
  return [bound](const MemoryState& final_state, const MemoryState&) { return x_of(final_state) <= bound; };
}

}  // namespace

TEST_CASE("one symbolic Bool in one If gives two paths") {
  const InitialState init = initial(true);
  const StmtList prog{LStatement{st::If{flag(), {assign(x(), i(1))}, {assign(x(), i(2))}}}};
  PathState start;
  start.exec = start_exec(init.mem, init.env, init.fenv, init.block, prog);
  const auto paths = explore(start, symbols(true), {});
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].decisions != paths[1].decisions);
  std::set<std::int64_t> xs;
  for (const auto& p : paths) {
    REQUIRE(p.witness);
    CHECK(p.exec.status == RunStatus::Done);
    xs.insert(x_of(*p.exec.mem));
  }
  CHECK(xs == std::set<std::int64_t>{1, 2});
}

TEST_CASE("assumptions prune infeasible branches") {
  const InitialState init = initial(true);
  const StmtList prog{LStatement{st::If{flag(), {assign(x(), i(1))}, {assign(x(), i(2))}}}};
  PathState start;
  start.exec = start_exec(init.mem, init.env, init.fenv, init.block, prog);
  const auto paths = explore(start, symbols(true), {sym_symbol(1, "flag", Scalar::boolean(false))});
  REQUIRE(paths.size() == 1);
  CHECK(x_of(*paths[0].exec.mem) == 1);
}

TEST_CASE("off-by-one bound is refuted with a reproducible witness") {
  const StmtList prog{assign(x(), make_bop(BinOp::Add, s(), i(1)))};
  const InitialState init = initial(false);
  VerifyOptions opts;
  opts.symbols = symbols(false);
  const Verdict bad = verify_triple([&] { return std::optional<InitialState>(init); }, prog, x_at_most(5), opts);
  REQUIRE(bad.status == VerdictStatus::Refuted);
  REQUIRE(bad.witness);
  CHECK((*bad.witness)[0] == 5u);

  const MemoryState concrete = concretize(init.mem, *bad.witness);
  CHECK(concrete_scalar(concrete.at(kS)));
  auto out = fether(1000, concrete, init.env, init.fenv, std::nullopt, prog);
  REQUIRE(out);
  CHECK_FALSE(x_at_most(5)(*out, concrete));

  const Verdict good = verify_triple([&] { return std::optional<InitialState>(init); }, prog, x_at_most(6), opts);
  CHECK(good.status == VerdictStatus::Verified);
  CHECK(good.paths == 1);
}

TEST_CASE("symbolic branch conditions split the domain") {
  const StmtList prog{LStatement{st::If{make_bop(BinOp::Lt, s(), i(3)), {assign(x(), s())}, {assign(x(), i(0))}}}};
  const InitialState init = initial(false);
  VerifyOptions opts;
  opts.symbols = symbols(false, 9);
  const Verdict v = verify_triple([&] { return std::optional<InitialState>(init); }, prog, x_at_most(2), opts);
  CHECK(v.status == VerdictStatus::Verified);
  CHECK(v.paths == 2);
}

TEST_CASE("verdicts for failures and gas exhaustion") {
  const InitialState init = initial(false);
  VerifyOptions opts;
  opts.symbols = symbols(false);
  auto pre = [&] { return std::optional<InitialState>(init); };
  const Verdict div = verify_triple(pre, {assign(x(), make_bop(BinOp::Div, i(6), s()))}, x_at_most(100), opts);
  CHECK(div.status == VerdictStatus::Error);
  const Verdict spin = verify_triple(pre, {LStatement{st::LoopWhile{make_bool(true), {}}}}, x_at_most(100), opts);
  CHECK(spin.status == VerdictStatus::Exhausted);
  const Verdict none = verify_triple([] { return std::optional<InitialState>(); }, {}, x_at_most(0), opts);
  CHECK(none.status == VerdictStatus::Error);
}

TEST_CASE("enumerator walks the product of domains") {
  const Enumerator e(symbols(true, 2), {});
  CHECK(e.space() == 6);
  std::vector<Assignment> seen;
  e.for_each_model({}, [&](const Assignment& a) {
    seen.push_back(a);
    return true;
  });
  CHECK(seen.size() == 6);
  const Sym s_is_two = sym_binary(BinOp::Eq, sym_symbol(0, "s", int_shape()), sym_const(Scalar::integer(IntType::i64(), 2)));
  auto m = e.first_model({s_is_two});
  REQUIRE(m);
  CHECK((*m)[0] == 2u);
  CHECK(e.satisfies(*m, {s_is_two}));
  const Enumerator none(symbols(false, 1), {s_is_two});
  CHECK_FALSE(none.first_model({}));
}

TEST_CASE("step executes a single statement") {
  const InitialState init = initial(false);
  PathState ps;
  ps.exec = start_exec(init.mem, init.env, init.fenv, init.block,
                       StmtList{assign(x(), i(4)), assign(x(), i(5))});
  PathState one = step(ps);
  CHECK(one.exec.dispatched == 1);
  CHECK(x_of(*one.exec.mem) == 4);
  CHECK(x_of(*ps.exec.mem) == 0);
}
