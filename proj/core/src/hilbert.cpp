#include "choicerank/hilbert.hpp"

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

namespace choicerank {

std::uint64_t hilbert_grid_side(std::size_t n) {
  std::uint64_t side = 1;
  while (side < n) side <<= 1;
  return side;
}

std::uint64_t hilbert_index(std::uint64_t side, NodeId src, NodeId dst) {
  // Classic xy -> d conversion with x = dst, y = src, which makes the first
  // move of the curve run along src.
  std::uint64_t x = dst;
  std::uint64_t y = src;
  std::uint64_t d = 0;
  for (std::uint64_t s = side / 2; s > 0; s /= 2) {
    const std::uint64_t rx = (x & s) ? 1 : 0;
    const std::uint64_t ry = (y & s) ? 1 : 0;
    d += s * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = side - 1 - x;
        y = side - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

DirectedGraph hilbert_reorder(const DirectedGraph& g) {
  const std::uint64_t side = hilbert_grid_side(g.node_count());
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed(g.edge_count());
  for (std::size_t e = 0; e < keyed.size(); ++e) {
    keyed[e] = {hilbert_index(side, g.sources()[e], g.targets()[e]), e};
  }
  // keys are distinct because (src, dst) pairs are distinct
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> perm(keyed.size());
  for (std::size_t k = 0; k < keyed.size(); ++k) perm[k] = keyed[k].second;
  return g.permuted(perm, StorageOrder::hilbert);
}

DirectedGraph src_sorted_reorder(const DirectedGraph& g) {
  std::vector<std::size_t> perm(g.edge_count());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const auto src = g.sources();
  const auto dst = g.targets();
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(src[a], dst[a]) < std::pair(src[b], dst[b]);
  });
  return g.permuted(perm, StorageOrder::src_sorted);
}

}  // namespace choicerank
