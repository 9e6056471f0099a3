#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace choicerank {

class DirectedGraph;

/// Per-node traffic: arrivals c_in[i] and departures c_out[i]. Real-valued so
/// that averaged or rescaled logs can be used directly.
struct TrafficMarginals {
  std::vector<double> c_in;
  std::vector<double> c_out;

  TrafficMarginals() = default;
  TrafficMarginals(std::vector<double> in, std::vector<double> out);
  /// All-zero traffic on n nodes.
  explicit TrafficMarginals(std::size_t n);

  std::size_t size() const noexcept { return c_in.size(); }
};

/// Traffic where one side may be unobserved.
struct PartialMarginals {
  std::optional<std::vector<double>> c_in;
  std::optional<std::vector<double>> c_out;
};

/// Fills the missing side assuming conserved flow (c_in[i] == c_out[i]).
/// Throws std::invalid_argument unless exactly one side is present.
TrafficMarginals conserve_flow(const PartialMarginals& partial);

/// Throws ModelError when the traffic does not match the graph: size
/// mismatch, negative or non-finite counts, or departures observed at a node
/// with no outgoing edge.
void check_consistency(const DirectedGraph& g, const TrafficMarginals& t);

/// Gamma(alpha, beta) prior on every strength. alpha must exceed 1 for the
/// posterior mode to exist on arbitrary graphs.
struct PriorConfig {
  double alpha = 2.0;
  double beta = 1.0;

  /// Throws std::invalid_argument.
  void validate() const;
};

/// Strictly positive, finite per-node strengths.
class StrengthVector {
 public:
  StrengthVector() = default;
  /// Throws std::invalid_argument on a non-positive or non-finite entry.
  explicit StrengthVector(std::vector<double> values);
  static StrengthVector constant(std::size_t n, double value);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }

  StrengthVector scaled(double s) const;

  friend bool operator==(const StrengthVector&, const StrengthVector&) = default;

 private:
  std::vector<double> values_;
};

}  // namespace choicerank
