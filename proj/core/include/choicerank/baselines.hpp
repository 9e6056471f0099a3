#pragma once

#include <cstddef>
#include <vector>

#include "choicerank/graph.hpp"
#include "choicerank/model.hpp"
#include "choicerank/transitions.hpp"

namespace choicerank {

/// q_ij proportional to c_in[j] over N+(i); rows whose targets all have zero
/// arrivals fall back to uniform.
EdgeTransitionTable baseline_traffic(const DirectedGraph& g, const TrafficMarginals& t);

struct PageRankOptions {
  double damping = 0.85;
  /// L1 change between successive iterates.
  double tol = 1e-10;
  std::size_t max_iter = 1000;
};

/// Random-surfer scores (sum to 1). The surfer follows a uniformly chosen
/// out-link with probability `damping` and otherwise teleports uniformly;
/// mass at nodes without out-links is spread uniformly. Edge weights are
/// ignored.
std::vector<double> pagerank(const DirectedGraph& g, const PageRankOptions& options = {});

/// q_ij proportional to scores[j] over N+(i), uniform fallback on zero rows.
EdgeTransitionTable baseline_pagerank(const DirectedGraph& g, const std::vector<double>& scores);

/// q_ij = 1 / |N+(i)|.
EdgeTransitionTable baseline_uniform(const DirectedGraph& g);

}  // namespace choicerank
