#include <doctest.h>

#include "generators.hpp"
#include "solsem/typecheck.hpp"

using namespace solsem;

namespace {

LExpr i64(std::int64_t v) { return make_int(v, IntType::i64()); }

std::optional<std::string> check(StmtList prog) { return typecheck_program(prog, core_type_context()); }

}  // namespace

TEST_CASE("annotates expressions with their types") {
  LExpr e = make_bop(BinOp::Lt, make_var({0}, LType::int64()), i64(3));
  const TypePair t = typecheck_expr(e, core_type_context());
  CHECK(t.result == LType::boolean());
  REQUIRE(e.types);
  const auto* bop = e.as<ex::Bop>();
  REQUIRE(bop);
  REQUIRE(bop->lhs->types);
  CHECK(bop->lhs->types->result == LType::int64());
}

TEST_CASE("rejects mixed integer widths") {
  LExpr e = make_bop(BinOp::Add, i64(1), make_int(1, IntType::u64()));
  CHECK_THROWS_AS(typecheck_expr(e, core_type_context()), TypeError);
}

TEST_CASE("rejects non-Bool conditions and Not on integers") {
  CHECK(check({LStatement{st::If{i64(1), {}, {}}}}));
  CHECK(check({LStatement{st::LoopWhile{i64(1), {}}}}));
  LExpr not_int = make_uop(UnOp::Not, i64(1));
  CHECK_THROWS_AS(typecheck_expr(not_int, core_type_context()), TypeError);
}

TEST_CASE("assignment types must agree") {
  CHECK_FALSE(check({LStatement{st::Assign{make_var({0}, LType::int64()), i64(2)}}}));
  CHECK(check({LStatement{st::Assign{make_var({4}, LType::boolean()), i64(2)}}}));
  CHECK(check({LStatement{st::Return{make_bool(true)}}}));
  CHECK_FALSE(check({LStatement{st::Return{i64(0)}}}));
}

TEST_CASE("struct declarations extend the context") {
  StmtList prog{LStatement{st::StructDecl{{20}, {{"a", LType::int64()}, {"b", LType::boolean()}}}},
                LStatement{st::Var{Access::Public, make_var({21}, LType::structure({20}))}},
                LStatement{st::Assign{make_var({21}, LType::structure({20})),
                                      LExpr{ex::Struct{{20}, {i64(1), make_bool(false)}}, std::nullopt}}}};
  CHECK_FALSE(check(prog));
  StmtList wrong = prog;
  wrong[2] = LStatement{st::Assign{make_var({21}, LType::structure({20})),
                                   LExpr{ex::Struct{{20}, {i64(1)}}, std::nullopt}}};
  CHECK(check(wrong));
}

TEST_CASE("generated typed programs are well typed") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    auto p = testgen::random_typed_program(rng);
    const auto err = typecheck_program(p.core.prog, testgen::typed_context());
    INFO("program " << n << ": " << err.value_or(""));
    CHECK_FALSE(err);
  }
}

TEST_CASE("every mutant is rejected") {
  std::mt19937_64 rng(12);
  std::map<std::string, int> kinds;
  for (int n = 0; n < 300; ++n) {
    auto m = testgen::random_mutant(rng);
    ++kinds[m.kind];
    INFO("mutant " << n << " (" << m.kind << ")");
    CHECK(typecheck_program(m.prog, testgen::typed_context()));
  }
  CHECK(kinds.size() == 7);
}
