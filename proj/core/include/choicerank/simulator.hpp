#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "choicerank/graph.hpp"
#include "choicerank/model.hpp"
#include "choicerank/transitions.hpp"

namespace choicerank {

/// Where each trajectory starts.
struct StartRule {
  enum class Kind { fixed, uniform, distribution };

  Kind kind = Kind::uniform;
  NodeId node = 0;
  std::vector<double> probabilities;

  static StartRule at(NodeId node) { return {Kind::fixed, node, {}}; }
  static StartRule uniform() { return {}; }
  static StartRule from(std::vector<double> probabilities) {
    return {Kind::distribution, 0, std::move(probabilities)};
  }
};

/// Exactly one of `length` (hops per trajectory) and `stop_probability`
/// must be set. With a stop probability q, before every hop the trajectory
/// ends with probability q, so the hop count is geometric with mean (1-q)/q.
struct TrajectorySpec {
  std::size_t num_trajectories = 1;
  std::optional<std::size_t> length;
  std::optional<double> stop_probability;
  StartRule start;
  std::uint64_t seed = 0;
  /// End a trajectory at a node without successors instead of failing.
  bool allow_early_stop = false;

  /// Throws std::invalid_argument.
  void validate(std::size_t node_count) const;
};

struct EdgeCount {
  NodeId src = 0;
  NodeId dst = 0;
  std::uint64_t count = 0;

  friend bool operator==(const EdgeCount&, const EdgeCount&) = default;
};

/// Transition counts per edge, sorted by (src, dst). Edges with zero count
/// may be listed; they mark alternatives that were available but not taken.
class EdgeCounts {
 public:
  EdgeCounts() = default;
  EdgeCounts(std::size_t node_count, std::vector<EdgeCount> entries);

  std::size_t node_count() const noexcept { return node_count_; }
  std::span<const EdgeCount> entries() const noexcept { return entries_; }
  std::uint64_t total() const;

  friend bool operator==(const EdgeCounts&, const EdgeCounts&) = default;

 private:
  std::size_t node_count_ = 0;
  std::vector<EdgeCount> entries_;
};

/// Samples independent trajectories of the choice process. Each hop from i
/// picks j in N+(i) with probability w_ij lambda_j / sum_k w_ik lambda_k.
/// Every edge of `g` appears in the result, with its count possibly zero.
/// Output depends only on the spec, never on `threads`. Throws ModelError if
/// a trajectory reaches a node without successors and early stop is off.
EdgeCounts sample_trajectories(const DirectedGraph& g, const StrengthVector& lambda,
                               const TrajectorySpec& spec, unsigned threads = 1);

/// c_out[i] = sum_j c_ij, c_in[i] = sum_j c_ji.
TrafficMarginals aggregate_marginals(const EdgeCounts& counts);

/// p*_ij = c_ij / sum_k c_ik; rows with zero total are omitted.
EdgeTransitionTable empirical_transitions(const EdgeCounts& counts);

}  // namespace choicerank
