#include "choicerank/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "choicerank/errors.hpp"
#include "choicerank/graph.hpp"

namespace choicerank {

TrafficMarginals::TrafficMarginals(std::vector<double> in, std::vector<double> out)
    : c_in(std::move(in)), c_out(std::move(out)) {
  if (c_in.size() != c_out.size()) {
    throw std::invalid_argument("c_in and c_out differ in length");
  }
}

TrafficMarginals::TrafficMarginals(std::size_t n) : c_in(n, 0.0), c_out(n, 0.0) {}

TrafficMarginals conserve_flow(const PartialMarginals& partial) {
  if (partial.c_in && partial.c_out) {
    throw std::invalid_argument("conserve_flow: both sides present, refusing to overwrite");
  }
  if (!partial.c_in && !partial.c_out) {
    throw std::invalid_argument("conserve_flow: both sides missing");
  }
  const auto& present = partial.c_in ? *partial.c_in : *partial.c_out;
  return TrafficMarginals(present, present);
}

void check_consistency(const DirectedGraph& g, const TrafficMarginals& t) {
  if (t.c_in.size() != g.node_count() || t.c_out.size() != g.node_count()) {
    throw ModelError("traffic covers " + std::to_string(t.size()) + " nodes, graph has " +
                     std::to_string(g.node_count()));
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t.c_in[i] >= 0.0) || !(t.c_out[i] >= 0.0) || !std::isfinite(t.c_in[i]) ||
        !std::isfinite(t.c_out[i])) {
      throw ModelError("node " + std::to_string(i) + " has a negative or non-finite count");
    }
  }
  std::vector<bool> has_successor(g.node_count(), false);
  for (NodeId s : g.sources()) has_successor[s] = true;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.c_out[i] > 0.0 && !has_successor[i]) {
      throw ModelError("node " + std::to_string(i) +
                       " has departures but no outgoing edge (empty choice set)");
    }
  }
}

void PriorConfig::validate() const {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("prior alpha must be finite and > 1");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("prior beta must be finite and > 0");
  }
}

StrengthVector::StrengthVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw std::invalid_argument("strength of node " + std::to_string(i) +
                                  " is not a positive finite number");
    }
  }
}

StrengthVector StrengthVector::constant(std::size_t n, double value) {
  return StrengthVector(std::vector<double>(n, value));
}

StrengthVector StrengthVector::scaled(double s) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= s;
  return StrengthVector(std::move(out));
}

}  // namespace choicerank
