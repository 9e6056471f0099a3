#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "choicerank/graph.hpp"
#include "choicerank/model.hpp"
#include "choicerank/simulator.hpp"
#include "oracles.hpp"

namespace testing_support {

using namespace choicerank;

inline oracle::Problem to_problem(const DirectedGraph& g, const TrafficMarginals& t,
                                  double alpha = 2.0, double beta = 1.0) {
  oracle::Problem p;
  p.n = g.node_count();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    p.edges.push_back({g.sources()[e], g.targets()[e], g.weight(e)});
  }
  p.c_in = t.c_in;
  p.c_out = t.c_out;
  p.alpha = alpha;
  p.beta = beta;
  return p;
}

/// Random digraph: every node gets 1..max_out distinct successors (self
/// loops allowed). Not necessarily strongly connected.
inline DirectedGraph random_graph(std::size_t n, std::size_t max_out, std::mt19937_64& rng,
                                  bool weighted = false) {
  std::vector<Edge> edges;
  std::vector<NodeId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<NodeId>(i);
  std::uniform_real_distribution<double> wdist(0.2, 5.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min(n, max_out))(rng);
    std::shuffle(ids.begin(), ids.end(), rng);
    for (std::size_t j = 0; j < k; ++j) {
      edges.push_back({static_cast<NodeId>(i), ids[j], weighted ? wdist(rng) : 1.0});
    }
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  return DirectedGraph(n, edges, weighted);
}

/// Marginals of random per-edge counts in [0, max_count]: consistent with g
/// and globally balanced.
inline TrafficMarginals edge_traffic(const DirectedGraph& g, std::mt19937_64& rng,
                                     int max_count = 20) {
  std::uniform_int_distribution<int> d(0, max_count);
  TrafficMarginals t(g.node_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const int c = d(rng);
    t.c_out[g.sources()[e]] += c;
    t.c_in[g.targets()[e]] += c;
  }
  return t;
}

/// Random nonnegative integer traffic, each side independent.
inline TrafficMarginals random_traffic(std::size_t n, std::mt19937_64& rng, int max_count = 50) {
  std::uniform_int_distribution<int> d(0, max_count);
  TrafficMarginals t(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.c_in[i] = d(rng);
    t.c_out[i] = d(rng);
  }
  return t;
}

inline std::vector<double> random_lambda(std::size_t n, std::mt19937_64& rng) {
  std::lognormal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

inline double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]) / std::max(std::abs(a[i]), std::abs(b[i])));
  }
  return m;
}

/// Max abs difference after scaling both so that entry 0 equals 1.
inline double max_diff_normalized(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] / a[0] - b[i] / b[0]));
  }
  return m;
}

}  // namespace testing_support
