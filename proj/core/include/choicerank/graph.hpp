#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace choicerank {

/// Dense node identifier in [0, n).
using NodeId = std::uint32_t;

enum class StorageOrder { as_loaded, hilbert, src_sorted };

std::string_view to_string(StorageOrder order);

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable directed graph stored as parallel edge arrays, in whatever order
/// the edges were loaded or reordered into. Weights are only materialized for
/// weighted graphs; an unweighted graph reports weight 1 for every edge.
///
/// Invariants (checked on construction): endpoints are < n, no (src, dst)
/// pair appears twice, weights are finite and strictly positive. Self-loops
/// are allowed.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Throws std::invalid_argument when an invariant is violated.
  DirectedGraph(std::size_t node_count, std::span<const Edge> edges, bool weighted,
                StorageOrder order = StorageOrder::as_loaded);

  /// Unweighted construction from bare endpoint arrays (moved in, no copy).
  DirectedGraph(std::size_t node_count, std::vector<NodeId> sources, std::vector<NodeId> targets,
                StorageOrder order = StorageOrder::as_loaded);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return sources_.size(); }
  bool weighted() const noexcept { return !weights_.empty(); }
  StorageOrder storage_order() const noexcept { return order_; }

  std::span<const NodeId> sources() const noexcept { return sources_; }
  std::span<const NodeId> targets() const noexcept { return targets_; }
  /// Empty for unweighted graphs.
  std::span<const double> weights() const noexcept { return weights_; }

  double weight(std::size_t e) const noexcept { return weights_.empty() ? 1.0 : weights_[e]; }
  Edge edge(std::size_t e) const noexcept { return {sources_[e], targets_[e], weight(e)}; }
  std::vector<Edge> edges() const;

  /// Same edges in a new order; `permutation[k]` is the old position of the
  /// edge placed at position k.
  DirectedGraph permuted(std::span<const std::size_t> permutation, StorageOrder order) const;

 private:
  void validate() const;

  std::size_t node_count_ = 0;
  std::vector<NodeId> sources_;
  std::vector<NodeId> targets_;
  std::vector<double> weights_;
  StorageOrder order_ = StorageOrder::as_loaded;
};

/// Positions (i, j), i < j, of the first repeated (src, dst) pair in
/// increasing order of the second occurrence, if any.
std::optional<std::pair<std::size_t, std::size_t>> find_duplicate_edge(
    std::span<const NodeId> sources, std::span<const NodeId> targets);

struct DegreeCensus {
  std::vector<std::size_t> out_degree;
  std::vector<std::size_t> in_degree;
};

DegreeCensus degree_census(const DirectedGraph& g);

/// Compressed adjacency view. Row i lists neighbours sorted by id together
/// with the position of the corresponding edge in the graph's edge arrays.
struct Adjacency {
  std::vector<std::size_t> offsets;  // size n + 1
  std::vector<NodeId> neighbors;
  std::vector<std::size_t> edge_index;

  std::size_t degree(NodeId i) const { return offsets[i + 1] - offsets[i]; }
  std::span<const NodeId> row(NodeId i) const {
    return std::span<const NodeId>(neighbors).subspan(offsets[i], degree(i));
  }
  std::span<const std::size_t> row_edges(NodeId i) const {
    return std::span<const std::size_t>(edge_index).subspan(offsets[i], degree(i));
  }
};

/// N+ rows (successors).
Adjacency out_adjacency(const DirectedGraph& g);
/// N- rows (predecessors).
Adjacency in_adjacency(const DirectedGraph& g);

}  // namespace choicerank
