#include "choicerank/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace choicerank {

EdgeTransitionTable::EdgeTransitionTable(std::size_t node_count, std::vector<Transition> entries)
    : node_count_(node_count), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const Transition& a, const Transition& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  offsets_.assign(node_count_ + 1, 0);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Transition& t = entries_[k];
    if (t.src >= node_count_ || t.dst >= node_count_) {
      throw std::invalid_argument("transition references node outside the table");
    }
    if (k > 0 && entries_[k - 1].src == t.src && entries_[k - 1].dst == t.dst) {
      throw std::invalid_argument("duplicate transition (" + std::to_string(t.src) + ", " +
                                  std::to_string(t.dst) + ")");
    }
    ++offsets_[t.src + 1];
  }
  for (std::size_t i = 0; i < node_count_; ++i) offsets_[i + 1] += offsets_[i];
}

std::span<const Transition> EdgeTransitionTable::row(NodeId i) const {
  if (i >= node_count_) return {};
  return std::span<const Transition>(entries_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

double EdgeTransitionTable::max_row_sum_error() const {
  double worst = 0.0;
  for (NodeId i = 0; i < node_count_; ++i) {
    const auto r = row(i);
    if (r.empty()) continue;
    double sum = 0.0;
    for (const Transition& t : r) sum += t.p;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

}  // namespace choicerank
