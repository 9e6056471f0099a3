#pragma once

#include <cstdint>

#include "choicerank/graph.hpp"

namespace choicerank {

/// Smallest power of two >= n (and >= 1); the side of the Hilbert grid.
std::uint64_t hilbert_grid_side(std::size_t n);

/// Position of cell (src, dst) along the Hilbert curve filling a
/// side x side grid, side a power of two.
///
/// Convention: src is the horizontal axis, dst the vertical axis, the curve
/// starts at the lower-left cell and its first move is along src. For
/// side == 2 the visiting order is (0,0), (1,0), (1,1), (0,1).
std::uint64_t hilbert_index(std::uint64_t side, NodeId src, NodeId dst);

/// Edges sorted by Hilbert index of (src, dst). Edge set, weights and node
/// count are unchanged.
DirectedGraph hilbert_reorder(const DirectedGraph& g);

/// Edges sorted by (src, dst).
DirectedGraph src_sorted_reorder(const DirectedGraph& g);

}  // namespace choicerank
