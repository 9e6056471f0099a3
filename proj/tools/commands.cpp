#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "json.hpp"

#include "choicerank/baselines.hpp"
#include "choicerank/diagnostics.hpp"
#include "choicerank/engine.hpp"
#include "choicerank/errors.hpp"
#include "choicerank/eval.hpp"
#include "choicerank/generators.hpp"
#include "choicerank/hilbert.hpp"
#include "choicerank/io.hpp"
#include "choicerank/rng.hpp"
#include "choicerank/simulator.hpp"

namespace choicerank::cli {

namespace {

using json = nlohmann::ordered_json;

DirectedGraph read_graph(const GraphInput& in) {
  EdgeListOptions options;
  options.weighted = in.weighted;
  options.node_count = in.nodes;
  return load_graph(in.path, options);
}

TrafficMarginals read_traffic(const std::string& path, std::size_t n, bool conserve) {
  return load_traffic(path, n, conserve);
}

/// "-" means standard output.
void write_to(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out = open_output(path);
  body(out);
  out.flush();
  if (!out) throw ParseError("write to '" + path + "' failed");
}

double parse_number(std::string_view text, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad " + what + ": '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) fields.push_back(f);
  return fields;
}

bool is_data_line(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first != std::string::npos && line[first] != '#';
}

json summary_json(const SummaryStats& s) {
  return json{{"mean", s.mean},   {"median", s.median},   {"p05", s.p05},
              {"p25", s.p25},     {"p75", s.p75},         {"p95", s.p95},
              {"count", s.count}, {"total_weight", s.total_weight}};
}

std::vector<std::size_t> as_sizes(const std::vector<NodeId>& ids) {
  return {ids.begin(), ids.end()};
}

}  // namespace

int run_rank(const RankConfig& c) {
  const DirectedGraph g = read_graph(c.graph);
  const TrafficMarginals t = read_traffic(c.traffic, g.node_count(), c.conserve_flow);

  FitOptions options;
  options.prior = {c.alpha, c.beta};
  options.tol = c.tol;
  options.max_iter = c.max_iter;
  options.threads = c.threads;
  if (!c.initial.empty()) {
    std::ifstream in = open_input(c.initial);
    options.initial = parse_strengths(in, g.node_count());
  }
  if (!c.quiet) {
    options.on_iteration = [](std::size_t it, double delta) {
      std::fprintf(stderr, "iter %zu delta %.6e\n", it, delta);
    };
  }

  const auto start = std::chrono::steady_clock::now();
  const FitReport report = fit(g, t, options);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_to(c.out, [&](std::ostream& out) { write_strengths(out, report.lambda); });
  if (!c.transitions_out.empty()) {
    const EdgeTransitionTable p = transition_probabilities(g, report.lambda);
    write_to(c.transitions_out, [&](std::ostream& out) { write_transitions(out, p); });
  }

  const double per_iter = report.iterations > 0 ? seconds / report.iterations : 0.0;
  if (options.tol <= 0.0) {
    // fixed iteration count, nothing to converge
    std::fprintf(stderr, "ran %zu iterations, %.6f s/iteration\n", report.iterations, per_iter);
    return exit_ok;
  }
  std::fprintf(stderr, "%s after %zu iterations, final delta %.6e, %.6f s/iteration\n",
               report.converged ? "converged" : "NOT converged", report.iterations,
               report.final_delta, per_iter);
  if (!report.converged && !c.best_effort) return exit_not_converged;
  return exit_ok;
}

int run_simulate(const SimulateConfig& c) {
  const DirectedGraph g = read_graph(c.graph);
  const std::size_t n = g.node_count();

  StrengthVector lambda;
  if (!c.lambda.empty() && !c.lambda_dist.empty()) {
    throw std::invalid_argument("give either --lambda or --lambda-dist, not both");
  }
  if (!c.lambda.empty()) {
    std::ifstream in = open_input(c.lambda);
    lambda = parse_strengths(in, n);
  } else if (!c.lambda_dist.empty()) {
    constexpr std::string_view prefix = "lognormal:";
    if (!c.lambda_dist.starts_with(prefix)) {
      throw std::invalid_argument("--lambda-dist must look like lognormal:SIGMA");
    }
    const double sigma =
        parse_number(std::string_view(c.lambda_dist).substr(prefix.size()), "sigma");
    lambda = lognormal_strengths(n, sigma, c.seed);
  } else {
    lambda = StrengthVector::constant(n, 1.0);
  }

  TrajectorySpec spec;
  spec.num_trajectories = c.trajectories;
  spec.length = c.length;
  spec.stop_probability = c.stop_probability;
  spec.seed = c.seed;
  spec.allow_early_stop = c.allow_early_stop;
  if (c.start == "uniform") {
    spec.start = StartRule::uniform();
  } else if (c.start.starts_with("node:")) {
    const double node = parse_number(std::string_view(c.start).substr(5), "start node");
    if (node < 0 || node != static_cast<double>(static_cast<NodeId>(node))) {
      throw std::invalid_argument("start node must be a nonnegative integer");
    }
    spec.start = StartRule::at(static_cast<NodeId>(node));
  } else {
    throw std::invalid_argument("--start must be 'uniform' or 'node:ID'");
  }

  const EdgeCounts counts = sample_trajectories(g, lambda, spec, c.threads);
  write_to(c.counts_out, [&](std::ostream& out) { write_edge_counts(out, counts); });
  if (!c.traffic_out.empty()) {
    const TrafficMarginals t = aggregate_marginals(counts);
    write_to(c.traffic_out, [&](std::ostream& out) { write_traffic(out, t); });
  }
  if (!c.lambda_out.empty()) {
    write_to(c.lambda_out, [&](std::ostream& out) { write_strengths(out, lambda); });
  }
  if (!c.transitions_out.empty()) {
    const EdgeTransitionTable p = empirical_transitions(counts);
    write_to(c.transitions_out, [&](std::ostream& out) { write_transitions(out, p); });
  }
  std::fprintf(stderr, "simulated %llu transitions over %zu trajectories\n",
               static_cast<unsigned long long>(counts.total()), c.trajectories);
  return exit_ok;
}

int run_baseline(const BaselineConfig& c) {
  const DirectedGraph g = read_graph(c.graph);
  EdgeTransitionTable table;
  if (c.method == "traffic") {
    if (c.traffic.empty()) throw std::invalid_argument("--method traffic needs --traffic");
    const TrafficMarginals t = read_traffic(c.traffic, g.node_count(), c.conserve_flow);
    table = baseline_traffic(g, t);
  } else if (c.method == "pagerank") {
    PageRankOptions options;
    options.damping = c.damping;
    const std::vector<double> scores = pagerank(g, options);
    table = baseline_pagerank(g, scores);
    if (!c.scores_out.empty()) {
      write_to(c.scores_out, [&](std::ostream& out) {
        for (std::size_t i = 0; i < scores.size(); ++i) {
          out << i << '\t' << format_real(scores[i]) << '\n';
        }
      });
    }
  } else if (c.method == "uniform") {
    table = baseline_uniform(g);
  } else {
    throw std::invalid_argument("unknown baseline '" + c.method + "'");
  }
  write_to(c.out, [&](std::ostream& out) { write_transitions(out, table); });
  return exit_ok;
}

int run_evaluate(const EvaluateConfig& c) {
  EdgeCounts truth = [&] {
    std::ifstream in = open_input(c.counts);
    return parse_edge_counts(in, c.nodes);
  }();
  const std::size_t n = truth.node_count();

  std::map<std::string, EdgeTransitionTable> estimates;
  for (const std::string& spec : c.estimates) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw std::invalid_argument("--estimate expects NAME=PATH, got '" + spec + "'");
    }
    const std::string name = spec.substr(0, eq);
    if (estimates.contains(name)) {
      throw std::invalid_argument("method '" + name + "' given twice");
    }
    std::ifstream in = open_input(spec.substr(eq + 1));
    estimates.emplace(name, parse_transitions(in, n));
  }

  const EvalReport report = evaluate(truth, estimates);

  write_to(c.out, [&](std::ostream& out) {
    out << "# method\tnode\tout_degree\tweight\tkl\trank_disp\n";
    for (const MethodReport& m : report.methods) {
      for (const NodeMetrics& r : m.nodes) {
        out << m.method << '\t' << r.node << '\t' << r.out_degree << '\t' << format_real(r.weight)
            << '\t' << format_real(r.kl) << '\t' << format_real(r.rank_disp) << '\n';
      }
    }
  });

  if (!c.summary.empty()) {
    json doc;
    doc["kl_log_base"] = "e";
    doc["rank_tie_break"] = "ascending node id";
    doc["weight"] = "truth departures c_out";
    doc["rank_disp_excludes_out_degree"] = 1;
    json methods = json::object();
    for (const MethodReport& m : report.methods) {
      json buckets = json::array();
      for (const DegreeBucket& b : m.by_degree) {
        buckets.push_back({{"min_degree", b.min_degree},
                           {"max_degree", b.max_degree},
                           {"nodes", b.nodes},
                           {"weight", b.weight},
                           {"mean_kl", b.mean_kl},
                           {"mean_rank_disp", b.mean_rank_disp}});
      }
      methods[m.method] = {{"nodes", m.nodes.size()},
                           {"kl", summary_json(m.kl)},
                           {"rank_disp", summary_json(m.rank_disp)},
                           {"by_degree", buckets}};
    }
    doc["methods"] = methods;
    write_to(c.summary, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
  }
  return exit_ok;
}

int run_check(const CheckConfig& c) {
  const DirectedGraph g = read_graph(c.graph);
  const TrafficMarginals t = read_traffic(c.traffic, g.node_count(), c.conserve_flow);
  const Diagnosis d = diagnose(g, t);

  std::cout << format_report(d);
  std::cout.flush();

  if (!c.json_out.empty()) {
    json doc;
    doc["hypergraph_connected"] = d.hypergraph_connected;
    doc["flow_feasible"] = d.flow_feasible;
    doc["comparison_graph_strongly_connected"] = d.comparison_graph_strongly_connected;
    doc["ml_well_posed"] = d.ml_well_posed;
    doc["map_guaranteed"] = d.flow_feasible;
    doc["witness"] = d.witness;

    json components = json::array();
    for (const auto& comp : d.hypergraph.components) components.push_back(as_sizes(comp));
    doc["hypergraph"] = {{"component_count", d.hypergraph.components.size()},
                         {"components", d.hypergraph.connected() ? json::array() : components}};

    const char* verdict = d.flow.verdict == FlowVerdict::feasible     ? "feasible"
                          : d.flow.verdict == FlowVerdict::imbalanced ? "imbalanced"
                                                                      : "infeasible";
    json flow = {{"verdict", verdict},
                 {"total_in", d.flow.total_in},
                 {"total_out", d.flow.total_out},
                 {"max_flow", d.flow.max_flow},
                 {"exact_integer", d.flow.exact_integer}};
    if (d.flow.cut) {
      flow["cut"] = {{"origins", as_sizes(d.flow.cut->origins)},
                     {"reachable", as_sizes(d.flow.cut->reachable)},
                     {"demand", d.flow.cut->demand},
                     {"capacity", d.flow.cut->capacity}};
    }
    doc["flow"] = flow;
    if (d.comparison) {
      doc["comparison_graph"] = {{"strongly_connected", d.comparison->strongly_connected},
                                 {"eps", d.comparison->eps},
                                 {"raise", as_sizes(d.comparison->raise)},
                                 {"rest", as_sizes(d.comparison->rest)}};
    }
    write_to(c.json_out, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
  }

  if (!c.flow_out.empty()) {
    if (!d.flow.flow) throw ModelError("no feasible flow to write");
    write_to(c.flow_out, [&](std::ostream& out) {
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        out << g.sources()[e] << '\t' << g.targets()[e] << '\t' << format_real(d.flow.flow->a[e])
            << '\n';
      }
    });
  }
  return exit_ok;
}

int run_reorder(const ReorderConfig& c) {
  const DirectedGraph g = read_graph(c.graph);
  DirectedGraph out_graph;
  if (c.order == "hilbert") {
    out_graph = hilbert_reorder(g);
  } else if (c.order == "src-sorted") {
    out_graph = src_sorted_reorder(g);
  } else if (c.order == "as-loaded") {
    out_graph = g;
  } else {
    throw std::invalid_argument("unknown order '" + c.order + "'");
  }
  write_to(c.out, [&](std::ostream& out) {
    if (c.binary) {
      write_binary_graph(out, out_graph);
    } else {
      write_edge_list(out, out_graph);
    }
  });
  return exit_ok;
}

int run_generate(const GenerateConfig& c) {
  DirectedGraph g;
  if (c.kind == "strongly-connected") {
    g = random_strongly_connected_graph(c.nodes, c.degree, c.seed);
  } else if (c.kind == "regular") {
    g = random_regular_out_graph(c.nodes, c.degree, c.seed);
  } else {
    throw std::invalid_argument("unknown graph kind '" + c.kind + "'");
  }
  write_to(c.out, [&](std::ostream& out) {
    if (c.binary) {
      write_binary_graph(out, g);
    } else {
      write_edge_list(out, g);
    }
  });

  if (!c.traffic_out.empty()) {
    const auto colon = c.traffic_range.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("--traffic-range must be LO:HI");
    const double lo = parse_number(std::string_view(c.traffic_range).substr(0, colon), "LO");
    const double hi = parse_number(std::string_view(c.traffic_range).substr(colon + 1), "HI");
    if (!(lo >= 0) || !(hi >= lo) || lo != static_cast<double>(static_cast<std::uint64_t>(lo)) ||
        hi != static_cast<double>(static_cast<std::uint64_t>(hi))) {
      throw std::invalid_argument("--traffic-range needs integers 0 <= LO <= HI");
    }
    // Stream 1 keeps the traffic draw independent of the graph draw.
    Rng rng = Rng::for_stream(c.seed, 1);
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    TrafficMarginals t(c.nodes);
    for (std::size_t i = 0; i < c.nodes; ++i) {
      t.c_in[i] = t.c_out[i] = lo + static_cast<double>(rng.below(span));
    }
    write_to(c.traffic_out, [&](std::ostream& out) { write_traffic(out, t); });
  }
  return exit_ok;
}

int run_remap(const RemapConfig& c) {
  const std::size_t columns = c.columns.value_or(c.reverse ? 1 : 2);
  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> ids;

  const bool have_map = std::filesystem::exists(c.map);
  if (have_map) {
    std::ifstream in = open_input(c.map);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!is_data_line(line)) continue;
      const auto f = split_fields(line);
      if (f.size() != 2) throw ParseError("map lines are 'id name'", line_no);
      if (f[0] != std::to_string(names.size())) {
        throw ParseError("map ids must be 0, 1, 2, ... in order", line_no);
      }
      if (!ids.emplace(f[1], names.size()).second) {
        throw ParseError("name '" + f[1] + "' mapped twice", line_no);
      }
      names.push_back(f[1]);
    }
  } else if (c.reverse) {
    throw ParseError("map file '" + c.map + "' does not exist");
  }

  std::ifstream in = open_input(c.in);
  std::ostringstream body;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!is_data_line(line)) {
      body << line << '\n';
      continue;
    }
    auto f = split_fields(line);
    if (f.size() < columns) {
      throw ParseError("expected at least " + std::to_string(columns) + " fields", line_no);
    }
    for (std::size_t k = 0; k < columns; ++k) {
      if (c.reverse) {
        std::size_t id = 0;
        const auto [ptr, ec] = std::from_chars(f[k].data(), f[k].data() + f[k].size(), id);
        if (ec != std::errc{} || ptr != f[k].data() + f[k].size() || id >= names.size()) {
          throw ParseError("unknown dense id '" + f[k] + "'", line_no);
        }
        f[k] = names[id];
      } else {
        auto [it, inserted] = ids.emplace(f[k], names.size());
        if (inserted) names.push_back(f[k]);
        f[k] = std::to_string(it->second);
      }
    }
    for (std::size_t k = 0; k < f.size(); ++k) body << (k ? "\t" : "") << f[k];
    body << '\n';
  }

  write_to(c.out, [&](std::ostream& out) { out << body.str(); });
  if (!c.reverse) {
    write_to(c.map, [&](std::ostream& out) {
      for (std::size_t i = 0; i < names.size(); ++i) out << i << '\t' << names[i] << '\n';
    });
  }
  return exit_ok;
}

}  // namespace choicerank::cli
