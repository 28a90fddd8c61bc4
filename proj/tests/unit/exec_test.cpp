#include <doctest.h>

#include "solsem/arith.hpp"
#include "solsem/engine.hpp"
#include "solsem/oracle.hpp"
#include "solsem/session.hpp"
#include "solsem/value.hpp"

using namespace solsem;

namespace {

struct Core {
  MemoryState mem = core_memory();
  Env env;
  Env fenv;

  explicit Core(std::uint64_t gas = 100) {
    env.gas = env.gas_limit = gas;
    env.level = 1;
    env.domain = Address{core_layout::function};
    fenv = env;
    fenv.level = 0;
    fenv.domain = Address{0};
  }
};

LExpr x() { return make_var({0}, LType::int64()); }
LExpr i(std::int64_t v) { return make_int(v, IntType::i64()); }
LStatement assign(LExpr lhs, LExpr rhs) { return LStatement{st::Assign{std::move(lhs), std::move(rhs)}}; }
LStatement declare_x() { return LStatement{st::Var{Access::Public, x()}}; }

std::optional<std::int64_t> int_at(const MemoryState& mem, Address a) {
  auto s = concrete_scalar(mem.at(a));
  if (!s || s->is_bool) return std::nullopt;
  return arith::as_signed(s->type, s->bits);
}

struct SourceRun {
  Session session;
  RunResult result;

  SourceRun(const std::string& src, const std::string& entry, std::uint64_t gas = 10000) {
    session.options().entry = entry;
    session.options().gas = gas;
    session.options().memory_size = 80;
    session.load_source(src);
    result = session.run();
  }
  std::optional<std::int64_t> global(const std::string& name) const {
    REQUIRE(result.final_state);
    return int_at(*result.final_state, session.program().globals.at(name).addr);
  }
};

}  // namespace

TEST_CASE("declaration then assignment") {
  Core c;
  auto out = ess(100, c.mem, std::nullopt, c.env, c.fenv, {declare_x(), assign(x(), i(5))});
  REQUIRE(out);
  CHECK(int_at(*out, {0}) == 5);
  CHECK(out->at({0}).domain == Address{core_layout::function});
}

TEST_CASE("assignment to an undeclared block fails") {
  Core c;
  CHECK_FALSE(ess(100, c.mem, std::nullopt, c.env, c.fenv, {assign(x(), i(5))}));
}

TEST_CASE("If picks a branch and charges one unit for itself") {
  Core c(10);
  const StmtList prog{declare_x(),
                      LStatement{st::If{make_bool(false), {assign(x(), i(1))}, {assign(x(), i(2))}}}};
  ExecState s = start_exec(c.mem, c.env, c.fenv, {}, prog);
  run_exec(s, {});
  CHECK(s.status == RunStatus::Done);
  CHECK(s.dispatched == 3);
  CHECK(s.env.gas == 7);
  CHECK(int_at(*s.mem, {0}) == 2);
}

TEST_CASE("while loop counts down") {
  Core c(200);
  const StmtList prog{declare_x(), assign(x(), i(0)),
                      LStatement{st::LoopWhile{make_bop(BinOp::Lt, x(), i(10)),
                                               {assign(x(), make_bop(BinOp::Add, x(), i(1)))}}}};
  auto out = ess(1000, c.mem, std::nullopt, c.env, c.fenv, prog);
  REQUIRE(out);
  CHECK(int_at(*out, {0}) == 10);
}

TEST_CASE("gas exhaustion stops without changing the state") {
  Core c(5);
  const StmtList prog{LStatement{st::LoopWhile{make_bool(true), {LStatement{st::Snil{}}}}}};
  ExecState s = start_exec(c.mem, c.env, c.fenv, {}, prog);
  run_exec(s, {});
  CHECK(s.status == RunStatus::OutOfGas);
  CHECK(s.dispatched == 5);
  CHECK(*s.mem == c.mem);
  auto out = fether(1000, c.mem, c.env, c.fenv, std::nullopt, prog);
  REQUIRE(out);
  CHECK(*out == c.mem);
}

TEST_CASE("Throw restores the initial state with the flag raised") {
  Core c;
  const StmtList prog{declare_x(), assign(x(), i(3)), LStatement{st::Throw{}}, assign(x(), i(4))};
  ExecState s = start_exec(c.mem, c.env, c.fenv, {}, prog);
  run_exec(s, {});
  CHECK(s.threw);
  REQUIRE(s.mem);
  CHECK(*s.mem == throw_state(c.mem));
  CHECK(s.mem->at(c.mem.reserved().throw_flag).as<cell::Bool>()->bit == true);
}

TEST_CASE("Return writes the return slot and ends the frame") {
  Core c;
  const StmtList prog{LStatement{st::Return{i(7)}}, LStatement{st::Throw{}}};
  ExecState s = start_exec(c.mem, c.env, c.fenv, {}, prog);
  run_exec(s, {});
  CHECK(s.status == RunStatus::Done);
  CHECK_FALSE(s.threw);
  CHECK(int_at(*s.mem, {core_layout::return_slot}) == 7);
}

TEST_CASE("env_check ends a frame whose domain matches at another level") {
  Env a;
  a.gas = 1;
  a.level = 1;
  a.domain = Address{3};
  Env b = a;
  b.level = 0;
  CHECK_FALSE(env_check(a, b));
  b.domain = Address{4};
  CHECK(env_check(a, b));
  a.gas = 0;
  CHECK_FALSE(env_check(a, b));
}

TEST_CASE("next_statement points into the program") {
  Core c;
  auto prog = std::make_shared<const StmtList>(StmtList{declare_x(), assign(x(), i(1))});
  ExecState s = start_exec(c.mem, c.env, c.fenv, {}, prog);
  CHECK(next_statement(s) == &(*prog)[0]);
  step_exec(s, {});
  CHECK(next_statement(s) == &(*prog)[1]);
  step_exec(s, {});
  step_exec(s, {});
  CHECK(next_statement(s) == nullptr);
  CHECK(s.status == RunStatus::Done);
}

TEST_CASE("function calls, returns and locals") {
  const char* src = R"(
contract C {
  int public result;
  function double(int v) public returns (int) {
    int t = v * 2;
    return t;
  }
  function main() public {
    result = double(21);
  }
}
)";
  SourceRun r(src, "main");
  CHECK(r.result.status == RunStatus::Done);
  CHECK(r.global("result") == 42);
}

TEST_CASE("for loops and require") {
  const char* src = R"(
contract C {
  int public total = 0;
  function main() public {
    for (int i = 0; i < 5; i = i + 1) {
      total = total + i;
    }
    require(total == 10);
  }
  function fails() public {
    total = 3;
    require(total == 4);
  }
}
)";
  SourceRun ok(src, "main");
  CHECK(ok.global("total") == 10);
  CHECK_FALSE(ok.result.threw);
  SourceRun bad(src, "fails");
  CHECK(bad.result.threw);
  REQUIRE(bad.result.final_state);
  CHECK(*bad.result.final_state == throw_state(bad.result.initial));
}

TEST_CASE("modifiers guard the function body") {
  const char* src = R"(
contract C {
  int public hits = 0;
  int public other = 0;
  modifier plain() { _; }
  modifier meddling() { other = 1; _; }
  modifier guarded() { require(hits == 5); _; }
  function a() public plain { hits = 1; }
  function b() public meddling { hits = 2; }
  function c() public guarded { hits = 3; }
}
)";
  SourceRun a(src, "a");
  CHECK(a.global("hits") == 1);
  SourceRun b(src, "b");
  CHECK(b.global("hits") == 0);
  CHECK(b.global("other") == 0);
  SourceRun c(src, "c");
  CHECK(c.result.threw);
}

TEST_CASE("out of gas in a source program") {
  const char* src = R"(
contract C {
  int public n = 0;
  function spin() public { while (true) { n = n + 1; } }
}
)";
  SourceRun r(src, "spin", 50);
  CHECK(r.result.status == RunStatus::OutOfGas);
  CHECK(r.result.dispatched == 50);
}
