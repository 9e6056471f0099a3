#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "choicerank/graph.hpp"
#include "choicerank/model.hpp"

namespace choicerank {

/// Connected components of the comparison hypergraph whose hyperedges are
/// the nonempty out-neighbourhoods N+(i). Components are listed by smallest
/// member; members are sorted.
struct HypergraphPartition {
  std::vector<std::size_t> component_of;
  std::vector<std::vector<NodeId>> components;

  bool connected() const { return components.size() <= 1; }
};

HypergraphPartition hypergraph_components(const DirectedGraph& g);

/// Nonnegative per-edge amounts a_ij (indexed by edge position) reproducing
/// the marginals: sum_j a_ij = c_out[i] and sum_j a_ji = c_in[i].
struct FeasibleFlow {
  std::vector<double> a;
};

enum class FlowVerdict { feasible, imbalanced, infeasible };

/// Hall-type infeasibility certificate read off a minimum cut: the origin
/// nodes `origins` must send `demand` departures, but every edge out of them
/// lands in `reachable`, whose arrivals only total `capacity` < `demand`.
struct FlowCertificate {
  std::vector<NodeId> origins;
  std::vector<NodeId> reachable;
  double demand = 0.0;
  double capacity = 0.0;
};

struct FlowResult {
  FlowVerdict verdict = FlowVerdict::infeasible;
  std::optional<FeasibleFlow> flow;
  std::optional<FlowCertificate> cut;
  double total_in = 0.0;
  double total_out = 0.0;
  double max_flow = 0.0;
  /// True when every count was integral and the exact integer solver ran.
  bool exact_integer = false;
};

/// Searches for a feasible flow by max-flow on the bipartite network
/// source -> origin i (cap c_out[i]) -> destination j (cap inf per edge)
/// -> sink (cap c_in[j]). Globally unbalanced traffic short-circuits to
/// `imbalanced`. Throws std::invalid_argument on negative counts.
FlowResult feasible_flow(const DirectedGraph& g, const TrafficMarginals& t);

/// Strong connectivity of the comparison graph: (i, j) is an edge when some
/// k has i, j in N+(k) and a_kj > eps. On failure `raise` / `rest` is a
/// partition with no comparison edge from `raise` into `rest`; scaling the
/// strengths of `raise` up never lowers the likelihood.
struct ComparisonCheck {
  bool strongly_connected = false;
  std::vector<NodeId> raise;
  std::vector<NodeId> rest;
  double eps = 0.0;
};

/// eps defaults to 1e-12 * max(a).
ComparisonCheck comparison_graph_scc(const DirectedGraph& g, const FeasibleFlow& flow,
                                     std::optional<double> eps = std::nullopt);

struct Diagnosis {
  bool hypergraph_connected = false;
  bool flow_feasible = false;
  bool comparison_graph_strongly_connected = false;
  bool ml_well_posed = false;
  std::string witness;

  HypergraphPartition hypergraph;
  FlowResult flow;
  std::optional<ComparisonCheck> comparison;
};

/// Runs all checks. ML estimation is well posed exactly when a feasible flow
/// exists and its comparison graph is strongly connected; MAP estimation
/// with alpha > 1 is well posed regardless.
Diagnosis diagnose(const DirectedGraph& g, const TrafficMarginals& t);

/// Multi-line human-readable report.
std::string format_report(const Diagnosis& d);

}  // namespace choicerank
