#include "solsem/layout.hpp"

#include <stdexcept>

namespace solsem {

namespace {
// sum over k = from..n-1 of prod_{j=from..k} dims[j]
std::uint64_t prefix_product_sum(const std::vector<std::uint64_t>& dims, std::size_t from) {
  std::uint64_t sum = 0;
  std::uint64_t product = 1;
  for (std::size_t k = from; k < dims.size(); ++k) {
    product *= dims[k];
    sum += product;
  }
  return sum;
}
}  // namespace

LayoutInfo array_layout(const std::vector<std::uint64_t>& dims) {
  if (dims.empty()) throw std::invalid_argument("array_layout: no dimensions");
  for (auto d : dims)
    if (d == 0) throw std::invalid_argument("array_layout: zero-length dimension");
  LayoutInfo info;
  info.array_size = prefix_product_sum(dims, 0);
  info.group_sizes.reserve(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) info.group_sizes.push_back(prefix_product_sum(dims, i) / dims[i]);
  return info;
}

std::uint64_t elem_offset(const std::vector<std::uint64_t>& indices, const std::vector<std::uint64_t>& groups) {
  if (indices.empty() || indices.size() != groups.size())
    throw std::invalid_argument("elem_offset: index and group lists differ in length");
  std::uint64_t offset = indices.size() - 1;
  for (std::size_t i = 0; i < indices.size(); ++i) offset += indices[i] * groups[i];
  return offset;
}

}  // namespace solsem
