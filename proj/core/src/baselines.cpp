#include "choicerank/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace choicerank {

namespace {

// Row-normalizes score[dst] over each out-neighbourhood.
EdgeTransitionTable proportional_to_target(const DirectedGraph& g,
                                           const std::vector<double>& score) {
  const std::size_t n = g.node_count();
  std::vector<double> row_total(n, 0.0);
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    row_total[g.sources()[e]] += score[g.targets()[e]];
    ++degree[g.sources()[e]];
  }
  std::vector<Transition> entries(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const NodeId i = g.sources()[e];
    const NodeId j = g.targets()[e];
    const double p = row_total[i] > 0.0 ? score[j] / row_total[i]
                                        : 1.0 / static_cast<double>(degree[i]);
    entries[e] = {i, j, p};
  }
  return EdgeTransitionTable(n, std::move(entries));
}

}  // namespace

EdgeTransitionTable baseline_traffic(const DirectedGraph& g, const TrafficMarginals& t) {
  if (t.size() != g.node_count()) throw std::invalid_argument("traffic size mismatch");
  return proportional_to_target(g, t.c_in);
}

std::vector<double> pagerank(const DirectedGraph& g, const PageRankOptions& options) {
  if (!(options.damping > 0.0 && options.damping < 1.0)) {
    throw std::invalid_argument("damping must lie in (0, 1)");
  }
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  const auto census = degree_census(g);
  const double uniform = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, uniform);
  std::vector<double> next(n);

  for (std::size_t it = 0; it < options.max_iter; ++it) {
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (census.out_degree[i] == 0) dangling += rank[i];
    }
    const double base = (1.0 - options.damping) * uniform + options.damping * dangling * uniform;
    std::fill(next.begin(), next.end(), base);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const NodeId i = g.sources()[e];
      next[g.targets()[e]] +=
          options.damping * rank[i] / static_cast<double>(census.out_degree[i]);
    }
    double change = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      change += std::abs(next[i] - rank[i]);
      total += next[i];
    }
    for (std::size_t i = 0; i < n; ++i) rank[i] = next[i] / total;
    if (change < options.tol) break;
  }
  return rank;
}

EdgeTransitionTable baseline_pagerank(const DirectedGraph& g, const std::vector<double>& scores) {
  if (scores.size() != g.node_count()) throw std::invalid_argument("score vector size mismatch");
  return proportional_to_target(g, scores);
}

EdgeTransitionTable baseline_uniform(const DirectedGraph& g) {
  return proportional_to_target(g, std::vector<double>(g.node_count(), 1.0));
}

}  // namespace choicerank
