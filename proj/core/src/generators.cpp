#include "choicerank/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "choicerank/rng.hpp"

namespace choicerank {

namespace {

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t k = items.size(); k > 1; --k) {
    std::swap(items[k - 1], items[rng.below(k)]);
  }
}

DirectedGraph shuffled_graph(std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges,
                             Rng& rng) {
  shuffle(edges, rng);
  std::vector<NodeId> src(edges.size());
  std::vector<NodeId> dst(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    src[e] = edges[e].first;
    dst[e] = edges[e].second;
  }
  return DirectedGraph(n, std::move(src), std::move(dst));
}

void add_random_successors(NodeId i, std::size_t n, std::size_t count, Rng& rng,
                           std::vector<NodeId>& row) {
  const std::size_t target = std::min(row.size() + count, n - 1);
  while (row.size() < target) {
    const auto j = static_cast<NodeId>(rng.below(n));
    if (j == i || std::find(row.begin(), row.end(), j) != row.end()) continue;
    row.push_back(j);
  }
}

}  // namespace

DirectedGraph random_strongly_connected_graph(std::size_t n, std::size_t extra_out_degree,
                                              std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  Rng rng(seed);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  shuffle(order, rng);

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(n * (extra_out_degree + 1));
  std::vector<NodeId> row;
  for (std::size_t k = 0; k < n; ++k) {
    const NodeId i = order[k];
    row.assign(1, order[(k + 1) % n]);
    add_random_successors(i, n, extra_out_degree, rng, row);
    for (NodeId j : row) edges.emplace_back(i, j);
  }
  return shuffled_graph(n, std::move(edges), rng);
}

DirectedGraph random_regular_out_graph(std::size_t n, std::size_t out_degree,
                                       std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(n * out_degree);
  std::vector<NodeId> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    add_random_successors(static_cast<NodeId>(i), n, out_degree, rng, row);
    for (NodeId j : row) edges.emplace_back(static_cast<NodeId>(i), j);
  }
  return shuffled_graph(n, std::move(edges), rng);
}

StrengthVector lognormal_strengths(std::size_t n, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be finite and nonnegative");
  }
  Rng rng(seed);
  std::vector<double> values(n);
  for (double& v : values) v = std::exp(sigma * rng.normal());
  return StrengthVector(std::move(values));
}

}  // namespace choicerank
