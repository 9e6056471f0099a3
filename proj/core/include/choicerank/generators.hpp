#pragma once

#include <cstddef>
#include <cstdint>

#include "choicerank/graph.hpp"
#include "choicerank/model.hpp"

namespace choicerank {

/// Random strongly connected digraph: a directed cycle through a random
/// permutation of the nodes plus `extra_out_degree` distinct random
/// successors per node (no self-loops, no duplicates). Edges are emitted in
/// shuffled order.
DirectedGraph random_strongly_connected_graph(std::size_t n, std::size_t extra_out_degree,
                                              std::uint64_t seed);

/// Edges emitted in shuffled order; every node gets `out_degree` distinct
/// uniformly random successors (self-loops excluded).
DirectedGraph random_regular_out_graph(std::size_t n, std::size_t out_degree, std::uint64_t seed);

/// lambda_i = exp(sigma * Z_i), Z_i standard normal.
StrengthVector lognormal_strengths(std::size_t n, double sigma, std::uint64_t seed);

}  // namespace choicerank
