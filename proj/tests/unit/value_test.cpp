#include <doctest.h>

#include "solsem/arith.hpp"
#include "solsem/exec.hpp"
#include "solsem/value.hpp"

using namespace solsem;

namespace {

MemoryValue i64(std::int64_t v) {
  MemoryValue out;
  out.payload = cell::Int{IntType::i64(), static_cast<std::uint64_t>(v), {}};
  out.occupancy = Occupancy::Occupy;
  return out;
}

MemoryValue boolean(bool b) {
  MemoryValue out;
  out.payload = cell::Bool{b, {}};
  out.occupancy = Occupancy::Occupy;
  return out;
}

struct Fixture {
  Env env;
  MemoryState mem{48};

  Fixture() {
    env.gas = env.gas_limit = 100;
    env.domain = Address{0};
    mem = init_mem(48, standard_library(48)).with_layout({8}, {41});
  }

  MemoryState declare(const LType& t, Address a) {
    auto out = init_var(mem, env, {}, Access::Public, t, a);
    REQUIRE(out);
    return *out;
  }
};

std::optional<std::int64_t> read_int(const MemoryState& mem, Address base, const std::vector<MemoryValue>& keys,
                                     const Env& env) {
  auto addr = id_map_path(keys, base, mem, env);
  if (!addr) return std::nullopt;
  const auto* node = mem.at(*addr).as<cell::MapNode>();
  if (!node || !node->entry) return std::nullopt;
  auto s = concrete_scalar(node->entry->second.get());
  if (!s) return std::nullopt;
  return arith::as_signed(s->type, s->bits);
}

}  // namespace

TEST_CASE("scalar cells and concrete values") {
  CHECK(concrete_scalar(i64(-3)) == Scalar::integer(IntType::i64(), static_cast<std::uint64_t>(-3)));
  CHECK(concrete_scalar(boolean(true)) == Scalar::boolean(true));
  MemoryValue unassigned;
  unassigned.payload = cell::Int{IntType::i64(), std::nullopt, {}};
  CHECK_FALSE(concrete_scalar(unassigned));
  CHECK_FALSE(scalar_term(unassigned));
  const MemoryValue tagged = scalar_cell(Scalar::integer(IntType::u64(), 9), boolean(false));
  CHECK(tagged.as<cell::Int>()->bits == 9u);
  CHECK(tagged.occupancy == Occupancy::Occupy);
}

TEST_CASE("truth of Bool cells") {
  CHECK(decide_truth(boolean(true), nullptr) == true);
  CHECK(decide_truth(boolean(false), nullptr) == false);
  CHECK_FALSE(decide_truth(i64(1), nullptr));
  const MemoryValue symbolic = symbolic_cell(sym_symbol(0, "x", Scalar::boolean(false)), Scalar::boolean(false),
                                             boolean(false));
  CHECK_FALSE(decide_truth(symbolic, nullptr));
}

TEST_CASE("index concretization is bounded") {
  CHECK(concretize_index(i64(2), 3, nullptr) == 2u);
  CHECK_FALSE(concretize_index(i64(3), 3, nullptr));
  CHECK_FALSE(concretize_index(i64(-1), 3, nullptr));
  CHECK_FALSE(concretize_index(boolean(true), 3, nullptr));
}

TEST_CASE("payload_equal compares payloads only") {
  MemoryValue a = i64(4);
  a.access = Access::Private;
  CHECK(payload_equal(a, i64(4), nullptr) == true);
  CHECK(payload_equal(a, i64(5), nullptr) == false);
}

TEST_CASE("value_has_type checks kinds and widths") {
  CHECK(value_has_type(i64(1), LType::int64()));
  CHECK_FALSE(value_has_type(i64(1), LType::uint64()));
  CHECK(value_has_type(boolean(true), LType::boolean()));
  CHECK_FALSE(value_has_type(boolean(true), LType::int64()));
}

TEST_CASE("default payloads") {
  const MemoryState mem = init_mem(32, standard_library(32));
  CHECK(std::holds_alternative<cell::Bool>(default_payload(LType::boolean(), mem)));
  const auto p = default_payload(LType::structure(mem.reserved().address_type), mem);
  REQUIRE(std::holds_alternative<cell::StructInstance>(p));
  CHECK(std::get<cell::StructInstance>(p).members.size() == 4);
}

TEST_CASE("mapping store then read") {
  Fixture f;
  const LType m = LType::map(LType::int64(), LType::int64());
  const MemoryState mem = f.declare(m, {0});
  CHECK_FALSE(read_int(mem, {0}, {i64(1)}, f.env));

  auto one = map_store(mem, {0}, {i64(1)}, i64(10), f.env);
  REQUIRE(one);
  auto two = map_store(*one, {0}, {i64(2)}, i64(20), f.env);
  REQUIRE(two);
  auto again = map_store(*two, {0}, {i64(1)}, i64(11), f.env);
  REQUIRE(again);
  CHECK(read_int(*two, {0}, {i64(1)}, f.env) == 10);
  CHECK(read_int(*two, {0}, {i64(2)}, f.env) == 20);
  CHECK(read_int(*again, {0}, {i64(1)}, f.env) == 11);
  CHECK(read_int(*again, {0}, {i64(2)}, f.env) == 20);
  // Overwriting an existing key allocates nothing new.
  CHECK(allocate(*again, 1)->first == allocate(*two, 1)->first);
  CHECK_FALSE(read_int(*again, {0}, {i64(3)}, f.env));
}

TEST_CASE("nested mapping chains") {
  Fixture f;
  const LType inner = LType::map(LType::int64(), LType::int64());
  const MemoryState mem = f.declare(LType::map(LType::int64(), inner), {0});
  std::optional<MemoryState> cur = mem;
  for (std::int64_t i = 0; i < 3; ++i)
    for (std::int64_t j = 0; j < 3; ++j) cur = map_store(*cur, {0}, {i64(i), i64(j)}, i64(i * 10 + j), f.env);
  REQUIRE(cur);
  for (std::int64_t i = 0; i < 3; ++i)
    for (std::int64_t j = 0; j < 3; ++j) CHECK(read_int(*cur, {0}, {i64(i), i64(j)}, f.env) == i * 10 + j);
  CHECK_FALSE(read_int(*cur, {0}, {i64(3), i64(0)}, f.env));
}

TEST_CASE("mapping store fails when the heap is full") {
  Fixture f;
  MemoryState mem = f.declare(LType::map(LType::int64(), LType::int64()), {0});
  mem = mem.with_layout({8}, {10});
  auto a = map_store(mem, {0}, {i64(1)}, i64(1), f.env);
  REQUIRE(a);
  auto b = map_store(*a, {0}, {i64(2)}, i64(2), f.env);
  REQUIRE(b);
  CHECK_FALSE(map_store(*b, {0}, {i64(3)}, i64(3), f.env));
}

TEST_CASE("literal values evaluate to cells") {
  const MemoryState mem(16);
  auto b = esv(10, LValue{val::Bool{true}}, mem, {}, {});
  REQUIRE(b);
  CHECK(b->as<cell::Bool>()->bit == true);
  auto i = esv(10, LValue{val::Int{IntType{8, false}, 200}}, mem, {}, {});
  REQUIRE(i);
  CHECK(i->as<cell::Int>()->type == IntType{8, false});
  CHECK_FALSE(esv(0, LValue{val::Bool{true}}, mem, {}, {}));
}
