#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "choicerank/graph.hpp"

namespace choicerank {

struct Transition {
  NodeId src = 0;
  NodeId dst = 0;
  double p = 0.0;
};

/// Per-edge transition probabilities grouped into rows by source node. Rows
/// are sorted by destination id. A node without entries has an empty row.
class EdgeTransitionTable {
 public:
  EdgeTransitionTable() = default;
  /// Entries may come in any order; (src, dst) pairs must be unique and < n.
  EdgeTransitionTable(std::size_t node_count, std::vector<Transition> entries);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const Transition> entries() const noexcept { return entries_; }
  std::span<const Transition> row(NodeId i) const;
  bool has_row(NodeId i) const { return !row(i).empty(); }

  /// Largest |sum_j p_ij - 1| over nonempty rows.
  double max_row_sum_error() const;

 private:
  std::size_t node_count_ = 0;
  std::vector<Transition> entries_;
  std::vector<std::size_t> offsets_;
};

}  // namespace choicerank
