#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "choicerank/errors.hpp"
#include "commands.hpp"

namespace {

using namespace choicerank::cli;

void add_graph_options(CLI::App* cmd, GraphInput& g) {
  cmd->add_option("-g,--graph", g.path, "Edge list TSV (src dst [weight]) or CRNK1 binary cache")
      ->required();
  cmd->add_flag("--weighted", g.weighted, "Read a third weight column");
  cmd->add_option("--nodes", g.nodes, "Node count (default: 1 + largest id)")
      ->check(CLI::PositiveNumber);
}

constexpr const char* evaluate_footer = R"(Outputs:
  --out      TSV, one row per (method, node) with positive truth departures:
               method      estimate name given to --estimate
               node        node id
               out_degree  number of candidate successors in the truth counts
               weight      truth departures c_out of the node
               kl          KL(truth row || estimate row), natural log
               rank_disp   sum of |rank differences| / out_degree^2,
                           ties broken by ascending node id
  --summary  JSON document. For each method: weighted mean, median,
             p05/p25/p75/p95 of kl and rank_disp (weights = c_out; nodes of
             out-degree 1 excluded from rank_disp), plus a per-out-degree
             breakdown in buckets 1, 2, 3-4, 5-8, ...)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"choicerank: infer Luce network choice strengths from marginal traffic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "choicerank 0.1.0");
  app.footer(
      "Exit codes: 0 ok, 2 usage, 3 parse or I/O error, 4 inconsistent model input, "
      "5 not converged.\nAll text formats are whitespace separated; '#' lines are comments.");

  std::function<int()> action;

  RankConfig rank;
  auto* c_rank = app.add_subcommand("rank", "Fit strengths (MAP) from graph + traffic");
  add_graph_options(c_rank, rank.graph);
  c_rank->add_option("-t,--traffic", rank.traffic, "Traffic TSV: node c_in c_out")->required();
  c_rank->add_option("-o,--out", rank.out, "Strength TSV output (node lambda), '-' = stdout")
      ->required();
  c_rank->add_option("--transitions", rank.transitions_out, "Also write src dst p TSV");
  c_rank->add_option("--init", rank.initial, "Starting strengths TSV (default all 1)");
  c_rank->add_option("--alpha", rank.alpha, "Gamma prior shape, > 1")->capture_default_str();
  c_rank->add_option("--beta", rank.beta, "Gamma prior rate, > 0")->capture_default_str();
  c_rank->add_option("--tol", rank.tol, "Stop when mean |change| per node < tol; <= 0 runs max-iter")
      ->capture_default_str();
  c_rank->add_option("--max-iter", rank.max_iter, "Iteration cap")->capture_default_str();
  c_rank->add_option("--threads", rank.threads, "Edge-scatter threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_rank->add_flag("--conserve-flow", rank.conserve_flow,
                   "Fill a '-' traffic column from the other side");
  c_rank->add_flag("--best-effort", rank.best_effort, "Exit 0 even when not converged");
  c_rank->add_flag("-q,--quiet", rank.quiet, "No per-iteration progress on stderr");
  c_rank->callback([&] { action = [&] { return run_rank(rank); }; });

  SimulateConfig sim;
  auto* c_sim = app.add_subcommand("simulate", "Sample choice trajectories and count edges");
  add_graph_options(c_sim, sim.graph);
  c_sim->add_option("--lambda", sim.lambda, "Ground-truth strength TSV");
  c_sim->add_option("--lambda-dist", sim.lambda_dist, "Draw strengths, e.g. lognormal:1.0");
  c_sim->add_option("-k,--trajectories", sim.trajectories, "Number of trajectories")
      ->capture_default_str();
  auto* len = c_sim->add_option("-T,--length", sim.length, "Hops per trajectory");
  auto* stop = c_sim->add_option("--stop-prob", sim.stop_probability,
                                 "Geometric length: stop before each hop with this probability");
  len->excludes(stop);
  c_sim->add_option("--start", sim.start, "'uniform' or 'node:ID'")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  c_sim->add_option("--threads", sim.threads, "Sampling threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_sim->add_flag("--allow-early-stop", sim.allow_early_stop,
                  "End a trajectory at a sink instead of failing");
  c_sim->add_option("-o,--counts", sim.counts_out, "Edge-count TSV output (src dst count)")
      ->required();
  c_sim->add_option("--traffic", sim.traffic_out, "Also write aggregated traffic TSV");
  c_sim->add_option("--lambda-out", sim.lambda_out, "Also write the strengths used");
  c_sim->add_option("--transitions", sim.transitions_out, "Also write empirical p TSV");
  c_sim->callback([&] { action = [&] { return run_simulate(sim); }; });

  BaselineConfig base;
  auto* c_base = app.add_subcommand("baseline", "Transition tables from simple baselines");
  add_graph_options(c_base, base.graph);
  c_base->add_option("-m,--method", base.method, "traffic | pagerank | uniform")
      ->required()
      ->check(CLI::IsMember({"traffic", "pagerank", "uniform"}));
  c_base->add_option("-t,--traffic", base.traffic, "Traffic TSV (method traffic)");
  c_base->add_flag("--conserve-flow", base.conserve_flow,
                   "Fill a '-' traffic column from the other side");
  c_base->add_option("--damping", base.damping, "PageRank damping")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  c_base->add_option("--scores", base.scores_out, "Also write PageRank scores (node score)");
  c_base->add_option("-o,--out", base.out, "Transition TSV output")->required();
  c_base->callback([&] { action = [&] { return run_baseline(base); }; });

  EvaluateConfig eval;
  auto* c_eval = app.add_subcommand("evaluate", "Score estimates against true edge counts");
  c_eval->add_option("-c,--counts", eval.counts, "Truth edge-count TSV (src dst count)")
      ->required();
  c_eval->add_option("-e,--estimate", eval.estimates, "NAME=PATH of a transition TSV; repeat")
      ->required();
  c_eval->add_option("--nodes", eval.nodes, "Node count (default: 1 + largest id in counts)");
  c_eval->add_option("-o,--out", eval.out, "Per-node TSV output")->required();
  c_eval->add_option("-s,--summary", eval.summary, "Summary JSON output");
  c_eval->footer(evaluate_footer);
  c_eval->callback([&] { action = [&] { return run_evaluate(eval); }; });

  CheckConfig check;
  auto* c_check =
      app.add_subcommand("check", "Report whether the ML problem is well posed");
  add_graph_options(c_check, check.graph);
  c_check->add_option("-t,--traffic", check.traffic, "Traffic TSV")->required();
  c_check->add_flag("--conserve-flow", check.conserve_flow,
                    "Fill a '-' traffic column from the other side");
  c_check->add_option("--json", check.json_out, "Structured report output, '-' = stdout");
  c_check->add_option("--flow", check.flow_out, "Write the feasible flow used (src dst a)");
  c_check->callback([&] { action = [&] { return run_check(check); }; });

  ReorderConfig reorder;
  auto* c_reorder = app.add_subcommand("reorder", "Rewrite a graph in another edge order");
  add_graph_options(c_reorder, reorder.graph);
  c_reorder->add_option("--order", reorder.order, "hilbert | src-sorted | as-loaded")
      ->capture_default_str()
      ->check(CLI::IsMember({"hilbert", "src-sorted", "as-loaded"}));
  c_reorder->add_option("-o,--out", reorder.out, "Output path")->required();
  c_reorder->add_flag("--binary", reorder.binary, "Write the CRNK1 binary cache");
  c_reorder->callback([&] { action = [&] { return run_reorder(reorder); }; });

  GenerateConfig gen;
  auto* c_gen = app.add_subcommand("generate", "Write a random synthetic graph");
  c_gen->add_option("-n,--nodes", gen.nodes, "Node count")->required()->check(
      CLI::PositiveNumber);
  c_gen->add_option("--kind", gen.kind,
                    "strongly-connected (cycle + random successors) | regular (fixed out-degree)")
      ->capture_default_str()
      ->check(CLI::IsMember({"strongly-connected", "regular"}));
  c_gen->add_option("-d,--degree", gen.degree,
                    "Extra successors per node (strongly-connected) or out-degree (regular)")
      ->capture_default_str();
  c_gen->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  c_gen->add_option("-o,--out", gen.out, "Graph output path")->required();
  c_gen->add_flag("--binary", gen.binary, "Write the CRNK1 binary cache");
  c_gen->add_option("--traffic", gen.traffic_out,
                    "Also write traffic with c_in = c_out uniform integer in --traffic-range");
  c_gen->add_option("--traffic-range", gen.traffic_range, "LO:HI")->capture_default_str();
  c_gen->callback([&] { action = [&] { return run_generate(gen); }; });

  RemapConfig remap;
  auto* c_remap = app.add_subcommand(
      "remap", "Translate string ids to dense ids (and back with --reverse)");
  c_remap->add_option("-i,--in", remap.in, "Input TSV")->required();
  c_remap->add_option("-o,--out", remap.out, "Output TSV")->required();
  c_remap->add_option("--map", remap.map,
                      "Map file (id name). Forward mode reads it if present and rewrites it")
      ->required();
  c_remap->add_option("--columns", remap.columns,
                      "Leading id columns to translate (default 2 forward, 1 reverse)");
  c_remap->add_flag("--reverse", remap.reverse, "Dense ids back to names");
  c_remap->callback([&] { action = [&] { return run_remap(remap); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    return action();
  } catch (const choicerank::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_parse;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_parse;
  } catch (const choicerank::ModelError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_model;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_usage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_model;
  }
}
