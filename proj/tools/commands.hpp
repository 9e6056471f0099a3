#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace choicerank::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 2,
  exit_parse = 3,
  exit_model = 4,
  exit_not_converged = 5,
};

struct GraphInput {
  std::string path;
  bool weighted = false;
  std::optional<std::size_t> nodes;
};

struct RankConfig {
  GraphInput graph;
  std::string traffic;
  std::string out;
  std::string transitions_out;
  std::string initial;
  double alpha = 2.0;
  double beta = 1.0;
  double tol = 1e-8;
  std::size_t max_iter = 10000;
  unsigned threads = 1;
  bool conserve_flow = false;
  bool best_effort = false;
  bool quiet = false;
};

struct SimulateConfig {
  GraphInput graph;
  std::string lambda;
  std::string lambda_dist;
  std::size_t trajectories = 1;
  std::optional<std::size_t> length;
  std::optional<double> stop_probability;
  std::string start = "uniform";
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool allow_early_stop = false;
  std::string counts_out;
  std::string traffic_out;
  std::string lambda_out;
  std::string transitions_out;
};

struct BaselineConfig {
  GraphInput graph;
  std::string method;
  std::string traffic;
  bool conserve_flow = false;
  double damping = 0.85;
  std::string out;
  std::string scores_out;
};

struct EvaluateConfig {
  std::string counts;
  std::vector<std::string> estimates;
  std::optional<std::size_t> nodes;
  std::string out;
  std::string summary;
};

struct CheckConfig {
  GraphInput graph;
  std::string traffic;
  bool conserve_flow = false;
  std::string json_out;
  std::string flow_out;
};

struct ReorderConfig {
  GraphInput graph;
  std::string order = "hilbert";
  std::string out;
  bool binary = false;
};

struct GenerateConfig {
  std::size_t nodes = 0;
  std::string kind = "strongly-connected";
  std::size_t degree = 3;
  std::uint64_t seed = 0;
  std::string out;
  bool binary = false;
  std::string traffic_out;
  std::string traffic_range = "100:500";
};

struct RemapConfig {
  std::string in;
  std::string out;
  std::string map;
  std::optional<std::size_t> columns;
  bool reverse = false;
};

int run_rank(const RankConfig& c);
int run_simulate(const SimulateConfig& c);
int run_baseline(const BaselineConfig& c);
int run_evaluate(const EvaluateConfig& c);
int run_check(const CheckConfig& c);
int run_reorder(const ReorderConfig& c);
int run_generate(const GenerateConfig& c);
int run_remap(const RemapConfig& c);

}  // namespace choicerank::cli
