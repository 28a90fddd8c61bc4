#pragma once

#include <cstdint>

#include "solsem/basic.hpp"

namespace solsem {

/// Execution environment: statement budget, call level and current domain.
struct Env {
  std::uint64_t gas = 0;
  std::uint64_t gas_limit = 0;
  std::uint32_t level = 0;
  Address domain;

  friend bool operator==(const Env&, const Env&) = default;
};

/// Blockchain context of one transaction.
struct BlockInfo {
  std::int64_t number = 0;
  std::int64_t timestamp = 0;
  std::int64_t sender = 0;
  std::int64_t value = 0;
  std::int64_t gas_price = 0;

  friend bool operator==(const BlockInfo&, const BlockInfo&) = default;
};

}  // namespace solsem
