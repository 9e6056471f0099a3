#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "choicerank/graph.hpp"
#include "choicerank/model.hpp"
#include "choicerank/transitions.hpp"

namespace choicerank {

/// Marginal log-likelihood
///   sum_i [ c_in[i] log lambda_i - c_out[i] log sum_{k in N+(i)} w_ik lambda_k ],
/// i.e. the per-edge log-likelihood up to the lambda-free sum_ij c_ij log w_ij.
double log_likelihood(const DirectedGraph& g, const TrafficMarginals& t,
                      const StrengthVector& lambda);

/// log_likelihood + sum_i [ (alpha - 1) log lambda_i - beta lambda_i ],
/// the log-posterior under i.i.d. Gamma(alpha, beta) priors up to a constant.
double log_posterior(const DirectedGraph& g, const TrafficMarginals& t,
                     const StrengthVector& lambda, const PriorConfig& prior);

/// One minorize-maximize update:
///   gamma_j   = c_out[j] / sum_{k in N+(j)} w_jk lambda_k   (0 when c_out[j] == 0)
///   lambda'_i = (c_in[i] + alpha - 1) / (sum_{j in N-(i)} w_ji gamma_j + beta)
/// The log-posterior never decreases across a step.
StrengthVector mm_step(const DirectedGraph& g, const TrafficMarginals& t,
                       const StrengthVector& lambda, const PriorConfig& prior);

/// p_ij = w_ij lambda_j / sum_{k in N+(i)} w_ik lambda_k for every edge.
EdgeTransitionTable transition_probabilities(const DirectedGraph& g, const StrengthVector& lambda);

/// Resident state of the edge-streaming solver: exactly four doubles per
/// node. `value` holds lambda between iterations and gamma between the two
/// edge passes of an iteration.
struct NodeState {
  double c_in;
  double c_out;
  double acc;
  double value;
};
static_assert(sizeof(NodeState) == 4 * sizeof(double));

/// Edge-streaming MM solver. Each `iterate()` makes two passes over the edge
/// arrays (in storage order) and two passes over the nodes. With threads > 1
/// the edge passes are split into contiguous shards that scatter into private
/// accumulators, reduced in shard order; results then depend on the thread
/// count only through floating-point summation order.
class ChoiceRankSolver {
 public:
  ChoiceRankSolver(const DirectedGraph& g, const TrafficMarginals& t, const PriorConfig& prior,
                   unsigned threads = 1);

  /// Sets lambda; defaults to all ones.
  void reset();
  void reset(const StrengthVector& lambda);

  void iterate();

  std::size_t node_count() const noexcept { return state_.size(); }
  double lambda(std::size_t i) const noexcept { return state_[i].value; }
  StrengthVector strengths() const;
  std::span<const NodeState> state() const noexcept { return state_; }

  /// Bytes of per-node state; shard accumulators used when threads > 1 are
  /// not included.
  std::size_t state_bytes() const noexcept { return state_.size() * sizeof(NodeState); }

 private:
  template <bool Weighted>
  void scatter_to_sources();
  template <bool Weighted>
  void scatter_to_targets();
  void reduce_shards();

  const DirectedGraph& graph_;
  PriorConfig prior_;
  unsigned threads_;
  std::vector<NodeState> state_;
  std::vector<std::vector<double>> shard_acc_;
};

struct FitOptions {
  PriorConfig prior{};
  /// Stop when ||lambda(t) - lambda(t-1)||_1 / n < tol. With tol <= 0 the
  /// solver runs exactly max_iter iterations, keeps no previous iterate, and
  /// reports a NaN final_delta.
  double tol = 1e-8;
  std::size_t max_iter = 10000;
  std::optional<StrengthVector> initial;
  bool record_trace = false;
  unsigned threads = 1;
  /// Called after every iteration with (iteration, delta).
  std::function<void(std::size_t, double)> on_iteration;
};

struct FitReport {
  StrengthVector lambda;
  std::size_t iterations = 0;
  double final_delta = 0.0;
  bool converged = false;
  /// log-posterior at lambda(0), lambda(1), ... when record_trace is set.
  std::vector<double> log_posterior_trace;
};

/// Runs MM iterations to the maximum a-posteriori strengths. Throws
/// ModelError on inconsistent input or if a non-finite value appears.
FitReport fit(const DirectedGraph& g, const TrafficMarginals& t, const FitOptions& options = {});

}  // namespace choicerank
