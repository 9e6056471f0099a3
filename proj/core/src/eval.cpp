#include "choicerank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "choicerank/errors.hpp"
#include "choicerank/metrics.hpp"

namespace choicerank {

double weighted_quantile(std::span<const double> values, std::span<const double> weights,
                         double q) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("values and weights differ in length");
  }
  std::vector<std::size_t> order;
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (weights[k] > 0.0) {
      order.push_back(k);
      total += weights[k];
    }
  }
  if (order.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double target = q * total;
  double cumulative = 0.0;
  for (std::size_t k : order) {
    cumulative += weights[k];
    if (cumulative >= target) return values[k];
  }
  return values[order.back()];
}

SummaryStats summarize(std::span<const double> values, std::span<const double> weights) {
  SummaryStats s;
  double weighted_sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(weights[k] > 0.0)) continue;
    s.total_weight += weights[k];
    weighted_sum += weights[k] * values[k];
    ++s.count;
  }
  s.mean = s.total_weight > 0.0 ? weighted_sum / s.total_weight
                                : std::numeric_limits<double>::quiet_NaN();
  s.p05 = weighted_quantile(values, weights, 0.05);
  s.p25 = weighted_quantile(values, weights, 0.25);
  s.median = weighted_quantile(values, weights, 0.50);
  s.p75 = weighted_quantile(values, weights, 0.75);
  s.p95 = weighted_quantile(values, weights, 0.95);
  return s;
}

const MethodReport& EvalReport::method(const std::string& name) const {
  for (const auto& m : methods) {
    if (m.method == name) return m;
  }
  throw std::out_of_range("no method named " + name);
}

namespace {

std::size_t bucket_of(std::size_t degree) {
  // 1 -> 0, 2 -> 1, 3-4 -> 2, 5-8 -> 3, ...
  std::size_t b = 0;
  std::size_t upper = 1;
  while (degree > upper) {
    upper *= 2;
    ++b;
  }
  return b;
}

std::vector<DegreeBucket> degree_breakdown(const std::vector<NodeMetrics>& nodes) {
  std::vector<DegreeBucket> buckets;
  for (const NodeMetrics& m : nodes) {
    const std::size_t b = bucket_of(m.out_degree);
    if (buckets.size() <= b) {
      for (std::size_t k = buckets.size(); k <= b; ++k) {
        const std::size_t hi = std::size_t{1} << k;
        buckets.push_back({k == 0 ? 1 : hi / 2 + 1, hi, 0, 0.0, 0.0, 0.0});
      }
    }
    DegreeBucket& bucket = buckets[b];
    ++bucket.nodes;
    bucket.weight += m.weight;
    bucket.mean_kl += m.weight * m.kl;
    bucket.mean_rank_disp += m.weight * m.rank_disp;
  }
  std::erase_if(buckets, [](const DegreeBucket& b) { return b.nodes == 0; });
  for (DegreeBucket& b : buckets) {
    b.mean_kl /= b.weight;
    b.mean_rank_disp /= b.weight;
  }
  return buckets;
}

}  // namespace

EvalReport evaluate(const EdgeCounts& truth,
                    const std::map<std::string, EdgeTransitionTable>& estimates) {
  const EdgeTransitionTable reference = empirical_transitions(truth);
  std::vector<double> departures(truth.node_count(), 0.0);
  for (const EdgeCount& c : truth.entries()) departures[c.src] += static_cast<double>(c.count);

  EvalReport report;
  for (const auto& [name, table] : estimates) {
    MethodReport method;
    method.method = name;
    for (NodeId i = 0; i < truth.node_count(); ++i) {
      const auto truth_row = reference.row(i);
      if (truth_row.empty()) continue;
      const auto estimate_row = table.row(i);
      if (estimate_row.empty()) {
        throw ModelError("estimate '" + name + "' has no row for node " + std::to_string(i));
      }
      NodeMetrics m;
      m.node = i;
      m.out_degree = truth_row.size();
      m.weight = departures[i];
      try {
        m.kl = kl_divergence(truth_row, estimate_row);
        m.rank_disp = rank_displacement(truth_row, estimate_row);
      } catch (const std::invalid_argument& err) {
        throw ModelError("estimate '" + name + "': " + err.what());
      }
      method.nodes.push_back(m);
    }

    std::vector<double> kl, rd, weight, rd_weight;
    for (const NodeMetrics& m : method.nodes) {
      kl.push_back(m.kl);
      rd.push_back(m.rank_disp);
      weight.push_back(m.weight);
      rd_weight.push_back(m.out_degree > 1 ? m.weight : 0.0);
    }
    method.kl = summarize(kl, weight);
    method.rank_disp = summarize(rd, rd_weight);
    method.by_degree = degree_breakdown(method.nodes);
    report.methods.push_back(std::move(method));
  }
  return report;
}

}  // namespace choicerank
