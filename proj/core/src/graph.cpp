#include "choicerank/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace choicerank {

std::string_view to_string(StorageOrder order) {
  switch (order) {
    case StorageOrder::as_loaded:
      return "as-loaded";
    case StorageOrder::hilbert:
      return "hilbert";
    case StorageOrder::src_sorted:
      return "src-sorted";
  }
  return "unknown";
}

DirectedGraph::DirectedGraph(std::size_t node_count, std::span<const Edge> edges, bool weighted,
                             StorageOrder order)
    : node_count_(node_count), order_(order) {
  sources_.reserve(edges.size());
  targets_.reserve(edges.size());
  if (weighted) weights_.reserve(edges.size());
  for (const Edge& e : edges) {
    sources_.push_back(e.src);
    targets_.push_back(e.dst);
    if (weighted) {
      weights_.push_back(e.weight);
    } else if (e.weight != 1.0) {
      throw std::invalid_argument("unweighted graph given an edge with weight != 1");
    }
  }
  validate();
}

DirectedGraph::DirectedGraph(std::size_t node_count, std::vector<NodeId> sources,
                             std::vector<NodeId> targets, StorageOrder order)
    : node_count_(node_count),
      sources_(std::move(sources)),
      targets_(std::move(targets)),
      order_(order) {
  if (sources_.size() != targets_.size()) {
    throw std::invalid_argument("source and target arrays differ in length");
  }
  validate();
}

void DirectedGraph::validate() const {
  if (node_count_ > std::size_t{std::numeric_limits<NodeId>::max()} + 1) {
    throw std::invalid_argument("node count exceeds the 32-bit id space");
  }
  for (std::size_t e = 0; e < sources_.size(); ++e) {
    if (sources_[e] >= node_count_ || targets_[e] >= node_count_) {
      throw std::invalid_argument("edge " + std::to_string(e) + " references node outside [0, " +
                                  std::to_string(node_count_) + ")");
    }
  }
  for (std::size_t e = 0; e < weights_.size(); ++e) {
    if (!(weights_[e] > 0.0) || !std::isfinite(weights_[e])) {
      throw std::invalid_argument("edge " + std::to_string(e) + " has nonpositive weight");
    }
  }
  if (auto dup = find_duplicate_edge(sources_, targets_)) {
    throw std::invalid_argument("duplicate edge (" + std::to_string(sources_[dup->second]) + ", " +
                                std::to_string(targets_[dup->second]) + ") at positions " +
                                std::to_string(dup->first) + " and " +
                                std::to_string(dup->second));
  }
}

std::vector<Edge> DirectedGraph::edges() const {
  std::vector<Edge> out(edge_count());
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = edge(e);
  return out;
}

DirectedGraph DirectedGraph::permuted(std::span<const std::size_t> permutation,
                                      StorageOrder order) const {
  if (permutation.size() != edge_count()) {
    throw std::invalid_argument("permutation size does not match edge count");
  }
  DirectedGraph out;
  out.node_count_ = node_count_;
  out.order_ = order;
  out.sources_.resize(edge_count());
  out.targets_.resize(edge_count());
  if (weighted()) out.weights_.resize(edge_count());
  for (std::size_t k = 0; k < permutation.size(); ++k) {
    const std::size_t e = permutation[k];
    out.sources_[k] = sources_[e];
    out.targets_[k] = targets_[e];
    if (weighted()) out.weights_[k] = weights_[e];
  }
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> find_duplicate_edge(
    std::span<const NodeId> sources, std::span<const NodeId> targets) {
  const std::size_t m = sources.size();
  std::vector<std::uint64_t> keys(m);
  for (std::size_t e = 0; e < m; ++e) {
    keys[e] = (std::uint64_t{sources[e]} << 32) | targets[e];
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (std::size_t k = 1; k < m; ++k) {
    if (keys[order[k]] == keys[order[k - 1]]) {
      // stable sort keeps equal keys in position order
      std::pair<std::size_t, std::size_t> hit{order[k - 1], order[k]};
      if (!best || hit.second < best->second) best = hit;
    }
  }
  return best;
}

DegreeCensus degree_census(const DirectedGraph& g) {
  DegreeCensus census{std::vector<std::size_t>(g.node_count(), 0),
                      std::vector<std::size_t>(g.node_count(), 0)};
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    ++census.out_degree[g.sources()[e]];
    ++census.in_degree[g.targets()[e]];
  }
  return census;
}

namespace {

Adjacency build_adjacency(std::size_t n, std::span<const NodeId> keys,
                          std::span<const NodeId> values) {
  Adjacency adj;
  adj.offsets.assign(n + 1, 0);
  for (NodeId k : keys) ++adj.offsets[k + 1];
  std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());

  std::vector<std::size_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  adj.neighbors.resize(keys.size());
  adj.edge_index.resize(keys.size());
  for (std::size_t e = 0; e < keys.size(); ++e) {
    const std::size_t slot = cursor[keys[e]]++;
    adj.neighbors[slot] = values[e];
    adj.edge_index[slot] = e;
  }

  std::vector<std::pair<NodeId, std::size_t>> scratch;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = adj.offsets[i];
    const std::size_t hi = adj.offsets[i + 1];
    if (std::is_sorted(adj.neighbors.begin() + lo, adj.neighbors.begin() + hi)) continue;
    scratch.clear();
    for (std::size_t s = lo; s < hi; ++s) scratch.emplace_back(adj.neighbors[s], adj.edge_index[s]);
    std::sort(scratch.begin(), scratch.end());
    for (std::size_t s = lo; s < hi; ++s) {
      adj.neighbors[s] = scratch[s - lo].first;
      adj.edge_index[s] = scratch[s - lo].second;
    }
  }
  return adj;
}

}  // namespace

Adjacency out_adjacency(const DirectedGraph& g) {
  return build_adjacency(g.node_count(), g.sources(), g.targets());
}

Adjacency in_adjacency(const DirectedGraph& g) {
  return build_adjacency(g.node_count(), g.targets(), g.sources());
}

}  // namespace choicerank
