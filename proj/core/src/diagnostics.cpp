#include "choicerank/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "choicerank/maxflow.hpp"

namespace choicerank {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Iterative Tarjan over a CSR digraph; returns SCC ids in reverse
// topological order of the condensation (sinks first).
std::vector<std::size_t> strong_components(const std::vector<std::size_t>& offsets,
                                           const std::vector<std::size_t>& targets) {
  const std::size_t n = offsets.size() - 1;
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (vertex, next arc)
  std::size_t counter = 0;
  std::size_t comp_count = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.emplace_back(root, offsets[root]);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, arc] = call.back();
      if (arc < offsets[v + 1]) {
        const std::size_t w = targets[arc++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, offsets[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comp_count;
        } while (w != done);
        ++comp_count;
      }
    }
  }
  return comp;
}

bool is_integral(double x) {
  return x == std::floor(x) && x <= 9007199254740992.0;  // 2^53
}

std::string join(const std::vector<NodeId>& nodes, std::size_t limit = 20) {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < nodes.size() && k < limit; ++k) {
    if (k) os << ", ";
    os << nodes[k];
  }
  if (nodes.size() > limit) os << ", ... (" << nodes.size() << " nodes)";
  os << '}';
  return os.str();
}

}  // namespace

HypergraphPartition hypergraph_components(const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  DisjointSets sets(n);
  const Adjacency out = out_adjacency(g);
  for (NodeId i = 0; i < n; ++i) {
    const auto row = out.row(i);
    for (std::size_t k = 1; k < row.size(); ++k) sets.unite(row[0], row[k]);
  }
  HypergraphPartition part;
  part.component_of.assign(n, 0);
  std::vector<std::size_t> label(n, static_cast<std::size_t>(-1));
  for (NodeId i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    if (label[root] == static_cast<std::size_t>(-1)) {
      label[root] = part.components.size();
      part.components.emplace_back();
    }
    part.component_of[i] = label[root];
    part.components[label[root]].push_back(i);
  }
  return part;
}

namespace {

template <typename Capacity>
FlowResult solve_flow(const DirectedGraph& g, const TrafficMarginals& t, FlowResult result,
                      Capacity edge_capacity, Capacity eps) {
  const std::size_t n = g.node_count();
  const std::size_t source = 2 * n;
  const std::size_t sink = 2 * n + 1;
  MaxFlow<Capacity> network(2 * n + 2, eps);
  for (std::size_t i = 0; i < n; ++i) {
    if (t.c_out[i] > 0) network.add_arc(source, i, static_cast<Capacity>(t.c_out[i]));
    if (t.c_in[i] > 0) network.add_arc(n + i, sink, static_cast<Capacity>(t.c_in[i]));
  }
  std::vector<std::size_t> edge_arc(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    edge_arc[e] = network.add_arc(g.sources()[e], n + g.targets()[e], edge_capacity);
  }
  const Capacity value = network.solve(source, sink);
  result.max_flow = static_cast<double>(value);

  bool saturated;
  if constexpr (std::is_floating_point_v<Capacity>) {
    saturated = value >= result.total_out - 1e-9 * std::max(1.0, result.total_out);
  } else {
    saturated = static_cast<double>(value) == result.total_out;
  }

  if (saturated) {
    result.verdict = FlowVerdict::feasible;
    FeasibleFlow flow;
    flow.a.resize(g.edge_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      flow.a[e] = std::max(0.0, static_cast<double>(network.flow(edge_arc[e])));
    }
    result.flow = std::move(flow);
    return result;
  }

  result.verdict = FlowVerdict::infeasible;
  const std::vector<bool> side = network.source_side(source);
  FlowCertificate cut;
  std::vector<bool> reached(n, false);
  const Adjacency out = out_adjacency(g);
  for (NodeId i = 0; i < n; ++i) {
    if (!side[i] || !(t.c_out[i] > 0)) continue;
    cut.origins.push_back(i);
    cut.demand += t.c_out[i];
    for (NodeId j : out.row(i)) reached[j] = true;
  }
  for (NodeId j = 0; j < n; ++j) {
    if (!reached[j]) continue;
    cut.reachable.push_back(j);
    cut.capacity += t.c_in[j];
  }
  result.cut = std::move(cut);
  return result;
}

}  // namespace

FlowResult feasible_flow(const DirectedGraph& g, const TrafficMarginals& t) {
  if (t.size() != g.node_count()) {
    throw std::invalid_argument("traffic size does not match graph");
  }
  FlowResult result;
  bool integral = true;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t.c_in[i] >= 0) || !(t.c_out[i] >= 0) || !std::isfinite(t.c_in[i]) ||
        !std::isfinite(t.c_out[i])) {
      throw std::invalid_argument("negative or non-finite count at node " + std::to_string(i));
    }
    result.total_in += t.c_in[i];
    result.total_out += t.c_out[i];
    integral = integral && is_integral(t.c_in[i]) && is_integral(t.c_out[i]);
  }
  integral = integral && result.total_out <= 4.0e18;

  const bool balanced = integral ? result.total_in == result.total_out
                                 : std::abs(result.total_in - result.total_out) <=
                                       1e-9 * std::max(1.0, result.total_out);
  if (!balanced) {
    result.verdict = FlowVerdict::imbalanced;
    return result;
  }

  if (integral) {
    result.exact_integer = true;
    const auto cap = static_cast<std::int64_t>(result.total_out) + 1;
    return solve_flow<std::int64_t>(g, t, result, cap, 0);
  }
  const double eps = 1e-13 * std::max(1.0, result.total_out);
  return solve_flow<double>(g, t, result, std::numeric_limits<double>::infinity(), eps);
}

ComparisonCheck comparison_graph_scc(const DirectedGraph& g, const FeasibleFlow& flow,
                                     std::optional<double> eps) {
  if (flow.a.size() != g.edge_count()) {
    throw std::invalid_argument("flow does not cover every edge");
  }
  const std::size_t n = g.node_count();
  ComparisonCheck check;
  const double max_a = flow.a.empty() ? 0.0 : *std::max_element(flow.a.begin(), flow.a.end());
  check.eps = eps.value_or(1e-12 * max_a);

  // Hub vertex h_k per nonempty N+(k): i -> h_k for i in N+(k) and
  // h_k -> j when a_kj > eps. Paths i -> h_k -> j are exactly the
  // comparison edges, so SCCs restricted to original nodes coincide.
  const Adjacency out = out_adjacency(g);
  std::vector<std::size_t> hub(n, static_cast<std::size_t>(-1));
  std::size_t vertices = n;
  for (NodeId k = 0; k < n; ++k) {
    if (out.degree(k) > 0) hub[k] = vertices++;
  }
  std::vector<std::vector<std::size_t>> arcs(vertices);
  for (NodeId k = 0; k < n; ++k) {
    if (hub[k] == static_cast<std::size_t>(-1)) continue;
    const auto row = out.row(k);
    const auto row_edges = out.row_edges(k);
    for (std::size_t s = 0; s < row.size(); ++s) {
      arcs[row[s]].push_back(hub[k]);
      if (flow.a[row_edges[s]] > check.eps) arcs[hub[k]].push_back(row[s]);
    }
  }
  std::vector<std::size_t> offsets(vertices + 1, 0);
  std::vector<std::size_t> targets;
  for (std::size_t v = 0; v < vertices; ++v) {
    offsets[v + 1] = offsets[v] + arcs[v].size();
    targets.insert(targets.end(), arcs[v].begin(), arcs[v].end());
  }
  const std::vector<std::size_t> comp = strong_components(offsets, targets);

  if (n <= 1) {
    check.strongly_connected = true;
    return check;
  }
  // Highest Tarjan id among original nodes is a source of the condensation
  // restricted to original nodes: nothing outside it beats anything inside.
  std::size_t source_comp = 0;
  for (NodeId i = 0; i < n; ++i) source_comp = std::max(source_comp, comp[i]);
  for (NodeId i = 0; i < n; ++i) {
    (comp[i] == source_comp ? check.rest : check.raise).push_back(i);
  }
  check.strongly_connected = check.raise.empty();
  if (check.strongly_connected) check.rest.clear();
  return check;
}

Diagnosis diagnose(const DirectedGraph& g, const TrafficMarginals& t) {
  Diagnosis d;
  d.hypergraph = hypergraph_components(g);
  d.hypergraph_connected = d.hypergraph.connected();
  d.flow = feasible_flow(g, t);
  d.flow_feasible = d.flow.verdict == FlowVerdict::feasible;
  if (d.flow_feasible) {
    d.comparison = comparison_graph_scc(g, *d.flow.flow);
    d.comparison_graph_strongly_connected = d.comparison->strongly_connected;
  }
  d.ml_well_posed = d.flow_feasible && d.comparison_graph_strongly_connected;

  std::ostringstream w;
  if (!d.hypergraph_connected) {
    const auto& comps = d.hypergraph.components;
    // Report the smallest component as the one that can be rescaled.
    const auto smallest = std::min_element(
        comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    w << "comparison hypergraph has " << comps.size() << " components; strengths of "
      << join(*smallest) << " can be rescaled without changing the likelihood. ";
  }
  switch (d.flow.verdict) {
    case FlowVerdict::imbalanced:
      w << "total arrivals " << d.flow.total_in << " != total departures " << d.flow.total_out
        << "; no edge flow reproduces the marginals. ";
      break;
    case FlowVerdict::infeasible:
      w << "origins " << join(d.flow.cut->origins) << " must send " << d.flow.cut->demand
        << " departures but their successors " << join(d.flow.cut->reachable)
        << " only receive " << d.flow.cut->capacity << " arrivals. ";
      break;
    case FlowVerdict::feasible:
      if (!d.comparison_graph_strongly_connected) {
        w << "no comparison edge from " << join(d.comparison->raise) << " into "
          << join(d.comparison->rest) << "; scaling up the strengths of "
          << join(d.comparison->raise) << " never decreases the likelihood. ";
      }
      break;
  }
  d.witness = w.str();
  if (!d.witness.empty()) d.witness.pop_back();
  return d;
}

std::string format_report(const Diagnosis& d) {
  auto yes_no = [](bool b) { return b ? "yes" : "no"; };
  std::ostringstream os;
  os << "comparison hypergraph connected:     " << yes_no(d.hypergraph_connected) << " ("
     << d.hypergraph.components.size() << " component"
     << (d.hypergraph.components.size() == 1 ? "" : "s") << ")\n";
  os << "feasible edge flow:                  ";
  switch (d.flow.verdict) {
    case FlowVerdict::feasible:
      os << "yes";
      break;
    case FlowVerdict::imbalanced:
      os << "no (marginals unbalanced)";
      break;
    case FlowVerdict::infeasible:
      os << "no (max flow " << d.flow.max_flow << " < " << d.flow.total_out << ")";
      break;
  }
  os << (d.flow.exact_integer ? " [exact integer max-flow]\n" : " [floating-point max-flow]\n");
  os << "comparison graph strongly connected: "
     << (d.comparison ? yes_no(d.comparison_graph_strongly_connected) : "n/a") << '\n';
  os << "ML estimate well posed:              " << yes_no(d.ml_well_posed) << '\n';
  if (!d.witness.empty()) os << "witness: " << d.witness << '\n';
  if (d.flow_feasible) {
    os << "note: the MAP estimate with alpha > 1 exists and is unique for this data.\n";
  } else {
    os << "note: without a feasible flow the MAP estimate is not guaranteed; fitting diverges if\n"
          "      departures forced into a node set exceed its arrivals plus (alpha - 1) per node.\n";
  }
  os << "note: this check runs a max-flow and costs far more than fitting the model.\n";
  return os.str();
}

}  // namespace choicerank
