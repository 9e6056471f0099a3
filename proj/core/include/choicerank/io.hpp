#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "choicerank/graph.hpp"
#include "choicerank/model.hpp"
#include "choicerank/simulator.hpp"
#include "choicerank/transitions.hpp"

namespace choicerank {

// All text formats are whitespace-separated (tabs on output), one record per
// line; blank lines and lines starting with '#' are skipped. Failures throw
// ParseError with the offending line number.

struct EdgeListOptions {
  /// Accept and keep a third weight column.
  bool weighted = false;
  /// Node count; defaults to 1 + largest id. Must cover every id.
  std::optional<std::size_t> node_count;
};

/// `src dst [weight]` per line.
DirectedGraph parse_edge_list(std::istream& in, const EdgeListOptions& options = {});
void write_edge_list(std::ostream& out, const DirectedGraph& g);

/// Binary cache: magic "CRNK1", u64 n, u64 m, then m records of
/// (u64 src, u64 dst, f64 weight), all little-endian. Reading yields an
/// as-loaded graph, weighted iff any weight differs from 1.
inline constexpr char binary_magic[] = "CRNK1";
void write_binary_graph(std::ostream& out, const DirectedGraph& g);
DirectedGraph read_binary_graph(std::istream& in);

/// Opens `path` and dispatches on the leading magic bytes.
DirectedGraph load_graph(const std::string& path, const EdgeListOptions& options = {});

/// `node c_in c_out` per line. A literal `-` in one column marks that side
/// as unobserved; it must then be `-` on every line. Unlisted nodes get zero
/// traffic. Ids must be < node_count.
PartialMarginals parse_traffic(std::istream& in, std::size_t node_count);
void write_traffic(std::ostream& out, const TrafficMarginals& t);

/// Reads traffic; a missing side is filled by conserve_flow only when
/// `conserve_flow_allowed`, otherwise it is a ParseError.
TrafficMarginals load_traffic(const std::string& path, std::size_t node_count,
                              bool conserve_flow_allowed = false);

/// `node lambda` per line, 17 significant digits. Every node must be listed.
void write_strengths(std::ostream& out, const StrengthVector& lambda);
StrengthVector parse_strengths(std::istream& in, std::size_t node_count);

/// `src dst p` per line.
void write_transitions(std::ostream& out, const EdgeTransitionTable& table);
EdgeTransitionTable parse_transitions(std::istream& in, std::size_t node_count);

/// `src dst count` per line.
void write_edge_counts(std::ostream& out, const EdgeCounts& counts);
EdgeCounts parse_edge_counts(std::istream& in, std::optional<std::size_t> node_count = {});

/// 17-significant-digit rendering used by every writer.
std::string format_real(double value);

std::ifstream open_input(const std::string& path);
std::ofstream open_output(const std::string& path);

}  // namespace choicerank
