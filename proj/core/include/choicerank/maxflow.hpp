#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <type_traits>
#include <vector>

namespace choicerank {

/// Dinic max-flow over a static arc list. Capacity may be an integer type
/// (exact) or a floating type, in which case residuals at or below `eps`
/// count as saturated.
template <typename Capacity>
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t vertex_count, Capacity eps = Capacity{0})
      : head_(vertex_count, npos), eps_(eps) {}

  /// Returns the arc id; the reverse arc is id ^ 1.
  std::size_t add_arc(std::size_t from, std::size_t to, Capacity capacity) {
    const std::size_t id = arcs_.size();
    arcs_.push_back({to, head_[from], capacity, Capacity{0}});
    head_[from] = id;
    arcs_.push_back({from, head_[to], Capacity{0}, Capacity{0}});
    head_[to] = id + 1;
    return id;
  }

  Capacity solve(std::size_t source, std::size_t sink) {
    Capacity total{0};
    while (build_levels(source, sink)) {
      cursor_ = head_;
      while (true) {
        const Capacity pushed = augment(source, sink, infinity());
        if (!(pushed > eps_)) break;
        total += pushed;
      }
    }
    return total;
  }

  Capacity flow(std::size_t arc) const { return arcs_[arc].flow; }

  /// Vertices reachable from `source` in the residual network; after
  /// `solve` this is the source side of a minimum cut.
  std::vector<bool> source_side(std::size_t source) const {
    std::vector<bool> seen(head_.size(), false);
    std::vector<std::size_t> stack{source};
    seen[source] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t a = head_[u]; a != npos; a = arcs_[a].next) {
        const Arc& arc = arcs_[a];
        if (!seen[arc.to] && residual(arc) > eps_) {
          seen[arc.to] = true;
          stack.push_back(arc.to);
        }
      }
    }
    return seen;
  }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  struct Arc {
    std::size_t to;
    std::size_t next;
    Capacity capacity;
    Capacity flow;
  };

  static Capacity infinity() {
    if constexpr (std::is_floating_point_v<Capacity>) {
      return std::numeric_limits<Capacity>::infinity();
    } else {
      return std::numeric_limits<Capacity>::max();
    }
  }

  static Capacity residual(const Arc& a) { return a.capacity - a.flow; }

  bool build_levels(std::size_t source, std::size_t sink) {
    level_.assign(head_.size(), -1);
    std::queue<std::size_t> queue;
    level_[source] = 0;
    queue.push(source);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop();
      for (std::size_t a = head_[u]; a != npos; a = arcs_[a].next) {
        const Arc& arc = arcs_[a];
        if (level_[arc.to] < 0 && residual(arc) > eps_) {
          level_[arc.to] = level_[u] + 1;
          queue.push(arc.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  Capacity augment(std::size_t u, std::size_t sink, Capacity limit) {
    if (u == sink) return limit;
    for (std::size_t& a = cursor_[u]; a != npos; a = arcs_[a].next) {
      Arc& arc = arcs_[a];
      if (level_[arc.to] != level_[u] + 1 || !(residual(arc) > eps_)) continue;
      const Capacity pushed = augment(arc.to, sink, std::min(limit, residual(arc)));
      if (pushed > eps_) {
        arc.flow += pushed;
        arcs_[a ^ 1].flow -= pushed;
        return pushed;
      }
    }
    return Capacity{0};
  }

  std::vector<std::size_t> head_;
  std::vector<std::size_t> cursor_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  Capacity eps_;
};

}  // namespace choicerank
