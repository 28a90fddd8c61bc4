#include <doctest.h>

#include "solsem/exec.hpp"
#include "solsem/value.hpp"

using namespace solsem;

TEST_CASE("array layout of int[2][3][2]") {
  const LayoutInfo info = array_layout({2, 3, 2});
  CHECK(info.array_size == 20);
  CHECK(info.group_sizes == std::vector<std::uint64_t>{10, 3, 1});
  CHECK(elem_offset({0, 1, 1}, info.group_sizes) == 6);
  CHECK(elem_offset({0, 0, 0}, info.group_sizes) == 2);
  CHECK(elem_offset({1, 2, 1}, info.group_sizes) == 19);
}

TEST_CASE("one-dimensional arrays have no headers") {
  const LayoutInfo info = array_layout({5});
  CHECK(info.array_size == 5);
  CHECK(info.group_sizes == std::vector<std::uint64_t>{1});
  for (std::uint64_t i = 0; i < 5; ++i) CHECK(elem_offset({i}, info.group_sizes) == i);
}

TEST_CASE("bad layout arguments") {
  CHECK_THROWS_AS(array_layout({}), std::invalid_argument);
  CHECK_THROWS_AS(array_layout({2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(elem_offset({1}, {3, 1}), std::invalid_argument);
}

TEST_CASE("init_array writes headers then elements depth first") {
  const LType t = LType::array(std::vector<std::uint64_t>{2, 2}, LType::boolean());
  MemoryState mem = init_mem(40, standard_library(40)).with_layout({0}, {33});
  auto out = init_array(100, mem, {4}, t, {});
  REQUIRE(out);
  // [hdr 0, b, b, hdr 1, b, b]
  REQUIRE(out->at({4}).as<cell::ArrayHeader>());
  CHECK(out->at({4}).as<cell::ArrayHeader>()->index == 0);
  CHECK(out->at({5}).is<cell::Bool>());
  CHECK(out->at({6}).is<cell::Bool>());
  REQUIRE(out->at({7}).as<cell::ArrayHeader>());
  CHECK(out->at({7}).as<cell::ArrayHeader>()->index == 1);
  CHECK(out->at({8}).is<cell::Bool>());
  CHECK(out->at({9}).is<cell::Bool>());
  CHECK(out->at({10}).occupancy == Occupancy::Free);
  CHECK_FALSE(init_array(0, mem, {4}, t, {}));
}

TEST_CASE("id_search rejects out-of-range paths") {
  const LType t = LType::array(std::vector<std::uint64_t>{2, 3, 2}, LType::int64());
  const MemoryState mem(64);
  CHECK(id_search(t, {10}, {0, 1, 1}, mem, {}) == Address{16});
  CHECK_FALSE(id_search(t, {10}, {2, 0, 0}, mem, {}));
  CHECK_FALSE(id_search(t, {10}, {0, 3, 0}, mem, {}));
  CHECK_FALSE(id_search(t, {10}, {0, 1}, mem, {}));
  CHECK_FALSE(id_search(t, {50}, {1, 2, 1}, mem, {}));
}
