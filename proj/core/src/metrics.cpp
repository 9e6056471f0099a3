#include "choicerank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <stdexcept>
#include <vector>

namespace choicerank {

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: support mismatch");
  double d = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0.0) continue;
    if (!(q[j] > 0.0)) return std::numeric_limits<double>::infinity();
    d += p[j] * std::log(p[j] / q[j]);
  }
  return std::max(d, 0.0);
}

namespace {

// rank[j] = 1-based position of j when sorted by decreasing value, ties by j.
std::vector<std::size_t> ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<std::size_t> rank(values.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
  return rank;
}

void require_same_support(std::span<const Transition> a, std::span<const Transition> b) {
  if (a.size() != b.size()) throw std::invalid_argument("support mismatch: row sizes differ");
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].src != b[k].src || a[k].dst != b[k].dst) {
      throw std::invalid_argument("support mismatch at node " + std::to_string(a[k].src));
    }
  }
}

std::vector<double> probabilities(std::span<const Transition> row) {
  std::vector<double> p(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) p[k] = row[k].p;
  return p;
}

}  // namespace

double rank_displacement(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("rank_displacement: support mismatch");
  if (p.empty()) return 0.0;
  const auto rp = ranks(p);
  const auto rq = ranks(q);
  std::size_t total = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    total += rp[j] > rq[j] ? rp[j] - rq[j] : rq[j] - rp[j];
  }
  const double k = static_cast<double>(p.size());
  return static_cast<double>(total) / (k * k);
}

double kl_divergence(std::span<const Transition> truth, std::span<const Transition> estimate) {
  require_same_support(truth, estimate);
  return kl_divergence(probabilities(truth), probabilities(estimate));
}

double rank_displacement(std::span<const Transition> truth, std::span<const Transition> estimate) {
  require_same_support(truth, estimate);
  return rank_displacement(probabilities(truth), probabilities(estimate));
}

}  // namespace choicerank
