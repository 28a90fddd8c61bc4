#pragma once

#include <cstdint>
#include <vector>

namespace solsem {

/// Block layout of an n-dimensional array. Every sub-array is stored as one
/// header block followed by its elements, depth first.
struct LayoutInfo {
  std::uint64_t array_size = 0;
  /// Blocks spanned by one element slot of each dimension (outermost first).
  std::vector<std::uint64_t> group_sizes;

  friend bool operator==(const LayoutInfo&, const LayoutInfo&) = default;
};

/// dims must be nonempty with positive entries.
LayoutInfo array_layout(const std::vector<std::uint64_t>& dims);

/// sum(indices[i] * groups[i]) + (n - 1)
std::uint64_t elem_offset(const std::vector<std::uint64_t>& indices, const std::vector<std::uint64_t>& groups);

}  // namespace solsem
