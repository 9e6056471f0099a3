#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "choicerank/simulator.hpp"
#include "choicerank/transitions.hpp"

namespace choicerank {

/// Weighted q-quantile: the smallest value v such that the total weight of
/// values <= v reaches q * W. Zero-weight values are ignored. NaN when the
/// total weight is zero.
double weighted_quantile(std::span<const double> values, std::span<const double> weights,
                         double q);

struct SummaryStats {
  double mean = 0.0;
  double median = 0.0;
  double p05 = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
  double p95 = 0.0;
  double total_weight = 0.0;
  std::size_t count = 0;
};

/// Weighted mean and the box-plot quantiles (5, 25, 50, 75, 95).
SummaryStats summarize(std::span<const double> values, std::span<const double> weights);

struct NodeMetrics {
  NodeId node = 0;
  std::size_t out_degree = 0;
  /// Departures observed at the node; the node's weight in every summary.
  double weight = 0.0;
  double kl = 0.0;
  double rank_disp = 0.0;
};

/// Out-degree bin [min_degree, max_degree] for the KL-vs-degree breakdown.
struct DegreeBucket {
  std::size_t min_degree = 0;
  std::size_t max_degree = 0;
  std::size_t nodes = 0;
  double weight = 0.0;
  double mean_kl = 0.0;
  double mean_rank_disp = 0.0;
};

struct MethodReport {
  std::string method;
  std::vector<NodeMetrics> nodes;
  SummaryStats kl;
  /// Excludes out-degree-1 nodes, whose displacement is always 0.
  SummaryStats rank_disp;
  std::vector<DegreeBucket> by_degree;
};

struct EvalReport {
  std::vector<MethodReport> methods;

  const MethodReport& method(const std::string& name) const;
};

/// Compares each estimate with the empirical transitions of `truth` at
/// every node with at least one observed departure, weighting nodes by that
/// number of departures. Degree bins are 1, 2, 3-4, 5-8, ... Throws
/// ModelError when an estimate lacks a required row or its row lists
/// different destinations.
EvalReport evaluate(const EdgeCounts& truth,
                    const std::map<std::string, EdgeTransitionTable>& estimates);

}  // namespace choicerank
