#include "choicerank/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "choicerank/errors.hpp"
#include "choicerank/rng.hpp"

namespace choicerank {

void TrajectorySpec::validate(std::size_t node_count) const {
  if (length.has_value() == stop_probability.has_value()) {
    throw std::invalid_argument("exactly one of length and stop_probability must be set");
  }
  if (stop_probability && !(*stop_probability > 0.0 && *stop_probability < 1.0)) {
    throw std::invalid_argument("stop_probability must lie in (0, 1)");
  }
  if (num_trajectories > 0 && node_count == 0) {
    throw std::invalid_argument("cannot start trajectories on an empty graph");
  }
  switch (start.kind) {
    case StartRule::Kind::fixed:
      if (start.node >= node_count) throw std::invalid_argument("start node out of range");
      break;
    case StartRule::Kind::uniform:
      break;
    case StartRule::Kind::distribution: {
      if (start.probabilities.size() != node_count) {
        throw std::invalid_argument("start distribution must have one entry per node");
      }
      double sum = 0.0;
      for (double p : start.probabilities) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
          throw std::invalid_argument("start distribution has a negative entry");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("start distribution does not sum to 1");
      }
      break;
    }
  }
}

EdgeCounts::EdgeCounts(std::size_t node_count, std::vector<EdgeCount> entries)
    : node_count_(node_count), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const EdgeCount& a, const EdgeCount& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k].src >= node_count_ || entries_[k].dst >= node_count_) {
      throw std::invalid_argument("edge count references node outside [0, n)");
    }
    if (k > 0 && entries_[k].src == entries_[k - 1].src && entries_[k].dst == entries_[k - 1].dst) {
      throw std::invalid_argument("duplicate edge in counts");
    }
  }
}

std::uint64_t EdgeCounts::total() const {
  std::uint64_t sum = 0;
  for (const EdgeCount& c : entries_) sum += c.count;
  return sum;
}

namespace {

struct Sampler {
  Adjacency out;
  std::vector<double> cumulative;  // running w * lambda within each row
  std::vector<double> start_cumulative;
};

NodeId draw_start(const TrajectorySpec& spec, const Sampler& s, std::size_t n, Rng& rng) {
  switch (spec.start.kind) {
    case StartRule::Kind::fixed:
      return spec.start.node;
    case StartRule::Kind::uniform:
      return static_cast<NodeId>(rng.below(n));
    case StartRule::Kind::distribution: {
      const double u = rng.uniform() * s.start_cumulative.back();
      auto it = std::upper_bound(s.start_cumulative.begin(), s.start_cumulative.end(), u);
      std::size_t k = static_cast<std::size_t>(it - s.start_cumulative.begin());
      if (k >= n) k = n - 1;
      // skip zero-probability entries that upper_bound could land on at u == 0
      while (spec.start.probabilities[k] == 0.0 && k + 1 < n) ++k;
      return static_cast<NodeId>(k);
    }
  }
  return 0;
}

void run_trajectory(const TrajectorySpec& spec, const Sampler& s, std::size_t n, std::size_t index,
                    std::vector<std::uint64_t>& counts) {
  Rng rng = Rng::for_stream(spec.seed, index);
  NodeId current = draw_start(spec, s, n, rng);
  const std::size_t max_hops =
      spec.length ? *spec.length : std::numeric_limits<std::size_t>::max();
  for (std::size_t hop = 0; hop < max_hops; ++hop) {
    if (spec.stop_probability && rng.uniform() < *spec.stop_probability) return;
    const std::size_t lo = s.out.offsets[current];
    const std::size_t hi = s.out.offsets[current + 1];
    if (lo == hi) {
      if (spec.allow_early_stop) return;
      throw ModelError("trajectory " + std::to_string(index) + " reached node " +
                       std::to_string(current) + " which has no successors");
    }
    const double total = s.cumulative[hi - 1];
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(s.cumulative.begin() + static_cast<std::ptrdiff_t>(lo),
                               s.cumulative.begin() + static_cast<std::ptrdiff_t>(hi), u);
    std::size_t slot = static_cast<std::size_t>(it - s.cumulative.begin());
    if (slot >= hi) slot = hi - 1;
    ++counts[slot];
    current = s.out.neighbors[slot];
  }
}

}  // namespace

EdgeCounts sample_trajectories(const DirectedGraph& g, const StrengthVector& lambda,
                               const TrajectorySpec& spec, unsigned threads) {
  const std::size_t n = g.node_count();
  if (lambda.size() != n) throw std::invalid_argument("strength vector size mismatch");
  spec.validate(n);

  Sampler s{out_adjacency(g), {}, {}};
  s.cumulative.resize(s.out.neighbors.size());
  for (NodeId i = 0; i < n; ++i) {
    double running = 0.0;
    for (std::size_t slot = s.out.offsets[i]; slot < s.out.offsets[i + 1]; ++slot) {
      running += g.weight(s.out.edge_index[slot]) * lambda[s.out.neighbors[slot]];
      s.cumulative[slot] = running;
    }
  }
  if (spec.start.kind == StartRule::Kind::distribution) {
    s.start_cumulative.resize(n);
    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      running += spec.start.probabilities[i];
      s.start_cumulative[i] = running;
    }
  }

  const std::size_t m = s.out.neighbors.size();
  const unsigned workers = std::max(1u, std::min<unsigned>(
                                            threads, static_cast<unsigned>(std::max<std::size_t>(
                                                         1, spec.num_trajectories))));
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(m, 0));
  std::vector<std::exception_ptr> failures(workers);
  auto work = [&](unsigned w) {
    try {
      const std::size_t lo = spec.num_trajectories * w / workers;
      const std::size_t hi = spec.num_trajectories * (w + 1) / workers;
      for (std::size_t k = lo; k < hi; ++k) run_trajectory(spec, s, n, k, partial[w]);
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<EdgeCount> entries(m);
  for (NodeId i = 0; i < n; ++i) {
    for (std::size_t slot = s.out.offsets[i]; slot < s.out.offsets[i + 1]; ++slot) {
      std::uint64_t total = 0;
      for (const auto& p : partial) total += p[slot];
      entries[slot] = {i, s.out.neighbors[slot], total};
    }
  }
  return EdgeCounts(n, std::move(entries));
}

TrafficMarginals aggregate_marginals(const EdgeCounts& counts) {
  TrafficMarginals t(counts.node_count());
  for (const EdgeCount& c : counts.entries()) {
    t.c_out[c.src] += static_cast<double>(c.count);
    t.c_in[c.dst] += static_cast<double>(c.count);
  }
  return t;
}

EdgeTransitionTable empirical_transitions(const EdgeCounts& counts) {
  const auto entries = counts.entries();
  std::vector<Transition> out;
  out.reserve(entries.size());
  std::size_t k = 0;
  while (k < entries.size()) {
    std::size_t end = k;
    std::uint64_t row_total = 0;
    while (end < entries.size() && entries[end].src == entries[k].src) {
      row_total += entries[end].count;
      ++end;
    }
    if (row_total > 0) {
      for (std::size_t r = k; r < end; ++r) {
        out.push_back({entries[r].src, entries[r].dst,
                       static_cast<double>(entries[r].count) / static_cast<double>(row_total)});
      }
    }
    k = end;
  }
  return EdgeTransitionTable(counts.node_count(), std::move(out));
}

}  // namespace choicerank
