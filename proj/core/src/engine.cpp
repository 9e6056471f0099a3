#include "choicerank/engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "choicerank/errors.hpp"

namespace choicerank {

namespace {

// z_i = sum_{k in N+(i)} w_ik lambda_k
std::vector<double> out_strength_sums(const DirectedGraph& g, const StrengthVector& lambda) {
  std::vector<double> z(g.node_count(), 0.0);
  const auto src = g.sources();
  const auto dst = g.targets();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    z[src[e]] += g.weight(e) * lambda[dst[e]];
  }
  return z;
}

void require_size(const DirectedGraph& g, const StrengthVector& lambda) {
  if (lambda.size() != g.node_count()) {
    throw std::invalid_argument("strength vector has " + std::to_string(lambda.size()) +
                                " entries, graph has " + std::to_string(g.node_count()) + " nodes");
  }
}

}  // namespace

double log_likelihood(const DirectedGraph& g, const TrafficMarginals& t,
                      const StrengthVector& lambda) {
  check_consistency(g, t);
  require_size(g, lambda);
  const std::vector<double> z = out_strength_sums(g, lambda);
  double ll = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (t.c_in[i] > 0.0) ll += t.c_in[i] * std::log(lambda[i]);
    if (t.c_out[i] > 0.0) ll -= t.c_out[i] * std::log(z[i]);
  }
  return ll;
}

double log_posterior(const DirectedGraph& g, const TrafficMarginals& t,
                     const StrengthVector& lambda, const PriorConfig& prior) {
  prior.validate();
  double lp = log_likelihood(g, t, lambda);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    lp += (prior.alpha - 1.0) * std::log(lambda[i]) - prior.beta * lambda[i];
  }
  return lp;
}

StrengthVector mm_step(const DirectedGraph& g, const TrafficMarginals& t,
                       const StrengthVector& lambda, const PriorConfig& prior) {
  check_consistency(g, t);
  require_size(g, lambda);
  ChoiceRankSolver solver(g, t, prior);
  solver.reset(lambda);
  solver.iterate();
  return solver.strengths();
}

EdgeTransitionTable transition_probabilities(const DirectedGraph& g,
                                             const StrengthVector& lambda) {
  require_size(g, lambda);
  const std::vector<double> z = out_strength_sums(g, lambda);
  std::vector<Transition> entries(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const NodeId i = g.sources()[e];
    const NodeId j = g.targets()[e];
    entries[e] = {i, j, g.weight(e) * lambda[j] / z[i]};
  }
  return EdgeTransitionTable(g.node_count(), std::move(entries));
}

ChoiceRankSolver::ChoiceRankSolver(const DirectedGraph& g, const TrafficMarginals& t,
                                   const PriorConfig& prior, unsigned threads)
    : graph_(g), prior_(prior), threads_(threads == 0 ? 1 : threads) {
  prior_.validate();
  if (t.size() != g.node_count()) {
    throw ModelError("traffic covers " + std::to_string(t.size()) + " nodes, graph has " +
                     std::to_string(g.node_count()));
  }
  state_.resize(g.node_count());
  for (std::size_t i = 0; i < state_.size(); ++i) {
    state_[i] = {t.c_in[i], t.c_out[i], 0.0, 1.0};
  }
  if (threads_ > 1) {
    shard_acc_.assign(threads_, std::vector<double>(g.node_count(), 0.0));
  }
}

void ChoiceRankSolver::reset() {
  for (NodeState& s : state_) {
    s.acc = 0.0;
    s.value = 1.0;
  }
}

void ChoiceRankSolver::reset(const StrengthVector& lambda) {
  if (lambda.size() != state_.size()) {
    throw std::invalid_argument("initial strengths have the wrong length");
  }
  for (std::size_t i = 0; i < state_.size(); ++i) {
    state_[i].acc = 0.0;
    state_[i].value = lambda[i];
  }
}

template <bool Weighted>
void ChoiceRankSolver::scatter_to_sources() {
  const NodeId* src = graph_.sources().data();
  const NodeId* dst = graph_.targets().data();
  const double* w = graph_.weights().data();
  const std::size_t m = graph_.edge_count();
  if (threads_ == 1) {
    NodeState* st = state_.data();
    for (std::size_t e = 0; e < m; ++e) {
      if constexpr (Weighted) {
        st[src[e]].acc += w[e] * st[dst[e]].value;
      } else {
        st[src[e]].acc += st[dst[e]].value;
      }
    }
    return;
  }
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < threads_; ++t) {
    workers.emplace_back([&, t] {
      const std::size_t lo = m * t / threads_;
      const std::size_t hi = m * (t + 1) / threads_;
      double* acc = shard_acc_[t].data();
      const NodeState* st = state_.data();
      for (std::size_t e = lo; e < hi; ++e) {
        if constexpr (Weighted) {
          acc[src[e]] += w[e] * st[dst[e]].value;
        } else {
          acc[src[e]] += st[dst[e]].value;
        }
      }
    });
  }
  workers.clear();
  reduce_shards();
}

template <bool Weighted>
void ChoiceRankSolver::scatter_to_targets() {
  const NodeId* src = graph_.sources().data();
  const NodeId* dst = graph_.targets().data();
  const double* w = graph_.weights().data();
  const std::size_t m = graph_.edge_count();
  if (threads_ == 1) {
    NodeState* st = state_.data();
    for (std::size_t e = 0; e < m; ++e) {
      if constexpr (Weighted) {
        st[dst[e]].acc += w[e] * st[src[e]].value;
      } else {
        st[dst[e]].acc += st[src[e]].value;
      }
    }
    return;
  }
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < threads_; ++t) {
    workers.emplace_back([&, t] {
      const std::size_t lo = m * t / threads_;
      const std::size_t hi = m * (t + 1) / threads_;
      double* acc = shard_acc_[t].data();
      const NodeState* st = state_.data();
      for (std::size_t e = lo; e < hi; ++e) {
        if constexpr (Weighted) {
          acc[dst[e]] += w[e] * st[src[e]].value;
        } else {
          acc[dst[e]] += st[src[e]].value;
        }
      }
    });
  }
  workers.clear();
  reduce_shards();
}

void ChoiceRankSolver::reduce_shards() {
  for (auto& shard : shard_acc_) {
    for (std::size_t i = 0; i < state_.size(); ++i) {
      state_[i].acc += shard[i];
      shard[i] = 0.0;
    }
  }
}

void ChoiceRankSolver::iterate() {
  // acc is zero on entry; each node pass consumes it and clears it again.
  if (graph_.weighted()) {
    scatter_to_sources<true>();
  } else {
    scatter_to_sources<false>();
  }
  for (NodeState& s : state_) {
    s.value = s.c_out > 0.0 ? s.c_out / s.acc : 0.0;
    s.acc = 0.0;
  }

  if (graph_.weighted()) {
    scatter_to_targets<true>();
  } else {
    scatter_to_targets<false>();
  }
  const double shape = prior_.alpha - 1.0;
  for (NodeState& s : state_) {
    s.value = (s.c_in + shape) / (s.acc + prior_.beta);
    s.acc = 0.0;
  }
}

StrengthVector ChoiceRankSolver::strengths() const {
  std::vector<double> out(state_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = state_[i].value;
  return StrengthVector(std::move(out));
}

namespace {

void require_finite(const ChoiceRankSolver& solver, std::size_t iteration,
                    const std::string& hint = {}) {
  for (std::size_t i = 0; i < solver.node_count(); ++i) {
    const double v = solver.lambda(i);
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw ModelError("non-finite strength at node " + std::to_string(i) + " after iteration " +
                       std::to_string(iteration) + hint);
    }
  }
}

// Scaling every strength by s moves the log-posterior by
// (sum c_in - sum c_out + (alpha - 1) n) log s - beta s sum(lambda), so a
// large enough departure surplus leaves it unbounded as s -> 0.
std::string imbalance_hint(const TrafficMarginals& t, const PriorConfig& prior) {
  double surplus = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) surplus += t.c_out[i] - t.c_in[i];
  const double limit = (prior.alpha - 1.0) * static_cast<double>(t.size());
  if (surplus < limit) return {};
  return " (departures exceed arrivals by " + std::to_string(surplus) +
         ", at least (alpha - 1) n = " + std::to_string(limit) +
         "; the posterior has no maximum)";
}

}  // namespace

FitReport fit(const DirectedGraph& g, const TrafficMarginals& t, const FitOptions& options) {
  options.prior.validate();
  check_consistency(g, t);
  const std::size_t n = g.node_count();

  ChoiceRankSolver solver(g, t, options.prior, options.threads);
  if (options.initial) {
    solver.reset(*options.initial);
  }

  FitReport report;
  if (options.record_trace) {
    report.log_posterior_trace.push_back(log_posterior(g, t, solver.strengths(), options.prior));
  }

  const std::string hint = imbalance_hint(t, options.prior);
  const bool track = options.tol > 0.0;
  std::vector<double> previous;
  if (track) {
    previous.resize(n);
    for (std::size_t i = 0; i < n; ++i) previous[i] = solver.lambda(i);
  }
  report.final_delta = track ? std::numeric_limits<double>::infinity()
                             : std::numeric_limits<double>::quiet_NaN();

  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    solver.iterate();
    report.iterations = it;
    if (track) {
      double delta = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = solver.lambda(i);
        if (!std::isfinite(v)) require_finite(solver, it, hint);
        delta += std::abs(v - previous[i]);
        previous[i] = v;
      }
      report.final_delta = n == 0 ? 0.0 : delta / static_cast<double>(n);
    }
    if (options.record_trace) {
      require_finite(solver, it, hint);
      report.log_posterior_trace.push_back(
          log_posterior(g, t, solver.strengths(), options.prior));
    }
    if (options.on_iteration) options.on_iteration(it, report.final_delta);
    if (track && report.final_delta < options.tol) {
      report.converged = true;
      break;
    }
  }
  require_finite(solver, report.iterations, hint);
  report.lambda = solver.strengths();
  return report;
}

}  // namespace choicerank
