#include "choicerank/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>
#include <vector>

#include "choicerank/errors.hpp"

namespace choicerank {

namespace {

/// Splits one line into whitespace-separated fields.
class Tokens {
 public:
  explicit Tokens(std::string_view line) {
    std::size_t k = 0;
    while (k < line.size()) {
      while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) ++k;
      const std::size_t start = k;
      while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r') ++k;
      if (k > start) fields_.push_back(line.substr(start, k - start));
    }
  }
  std::size_t size() const { return fields_.size(); }
  std::string_view operator[](std::size_t k) const { return fields_[k]; }

 private:
  std::vector<std::string_view> fields_;
};

/// Iterates over data lines, tracking line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(Tokens& tokens) {
    while (std::getline(in_, line_)) {
      ++number_;
      const auto first = line_.find_first_not_of(" \t\r");
      if (first == std::string::npos || line_[first] == '#') continue;
      tokens = Tokens(line_);
      return true;
    }
    return false;
  }
  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t number_ = 0;
};

std::uint64_t parse_id(std::string_view field, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError("expected a nonnegative integer, got '" + std::string(field) + "'", line);
  }
  if (value > std::numeric_limits<NodeId>::max()) {
    throw ParseError("node id " + std::string(field) + " exceeds the 32-bit id space", line);
  }
  return value;
}

double parse_real(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ParseError("expected a finite number, got '" + std::string(field) + "'", line);
  }
  return value;
}

std::uint64_t parse_count(std::string_view field, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError("expected a nonnegative integer count, got '" + std::string(field) + "'",
                     line);
  }
  return value;
}

void require_fields(const Tokens& t, std::size_t expected, std::size_t line, const char* layout) {
  if (t.size() != expected) {
    throw ParseError("expected " + std::to_string(expected) + " fields (" + layout + "), got " +
                         std::to_string(t.size()),
                     line);
  }
}

std::size_t resolve_node_count(std::optional<std::size_t> requested, std::size_t observed) {
  if (!requested) return observed;
  if (*requested < observed) {
    throw ParseError("node count " + std::to_string(*requested) + " is smaller than 1 + max id (" +
                     std::to_string(observed) + ")");
  }
  return *requested;
}

void write_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int k = 0; k < 8; ++k) bytes[k] = static_cast<char>((v >> (8 * k)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t read_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw ParseError("binary graph cache is truncated");
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= std::uint64_t{bytes[k]} << (8 * k);
  return v;
}

}  // namespace

std::string format_real(double value) {
  std::array<char, 64> buf;
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  return out;
}

DirectedGraph parse_edge_list(std::istream& in, const EdgeListOptions& options) {
  std::vector<Edge> edges;
  std::vector<std::size_t> lines;
  std::size_t observed = 0;
  LineReader reader(in);
  Tokens t("");
  while (reader.next(t)) {
    const std::size_t line = reader.number();
    if (t.size() != 2 && t.size() != 3) {
      throw ParseError("expected 'src dst' or 'src dst weight', got " + std::to_string(t.size()) +
                           " fields",
                       line);
    }
    if (t.size() == 3 && !options.weighted) {
      throw ParseError("weight column present but graph is loaded as unweighted", line);
    }
    Edge e;
    e.src = static_cast<NodeId>(parse_id(t[0], line));
    e.dst = static_cast<NodeId>(parse_id(t[1], line));
    if (t.size() == 3) {
      e.weight = parse_real(t[2], line);
      if (!(e.weight > 0.0)) throw ParseError("nonpositive weight " + std::string(t[2]), line);
    }
    observed = std::max<std::size_t>(observed, std::max(e.src, e.dst) + std::size_t{1});
    edges.push_back(e);
    lines.push_back(line);
  }
  const std::size_t n = resolve_node_count(options.node_count, observed);

  std::vector<NodeId> src(edges.size()), dst(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    src[e] = edges[e].src;
    dst[e] = edges[e].dst;
  }
  if (auto dup = find_duplicate_edge(src, dst)) {
    throw ParseError("duplicate edge (" + std::to_string(src[dup->second]) + ", " +
                         std::to_string(dst[dup->second]) + "), first seen on line " +
                         std::to_string(lines[dup->first]),
                     lines[dup->second]);
  }
  if (!options.weighted) {
    return DirectedGraph(n, std::move(src), std::move(dst));
  }
  return DirectedGraph(n, edges, true);
}

void write_edge_list(std::ostream& out, const DirectedGraph& g) {
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    out << g.sources()[e] << '\t' << g.targets()[e];
    if (g.weighted()) out << '\t' << format_real(g.weights()[e]);
    out << '\n';
  }
}

void write_binary_graph(std::ostream& out, const DirectedGraph& g) {
  static_assert(std::numeric_limits<double>::is_iec559);
  out.write(binary_magic, 5);
  write_u64(out, g.node_count());
  write_u64(out, g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    write_u64(out, g.sources()[e]);
    write_u64(out, g.targets()[e]);
    write_u64(out, std::bit_cast<std::uint64_t>(g.weight(e)));
  }
}

DirectedGraph read_binary_graph(std::istream& in) {
  std::array<char, 5> magic{};
  in.read(magic.data(), magic.size());
  if (!in || std::memcmp(magic.data(), binary_magic, 5) != 0) {
    throw ParseError("not a binary graph cache (bad magic)");
  }
  const std::uint64_t n = read_u64(in);
  const std::uint64_t m = read_u64(in);
  if (n > std::uint64_t{std::numeric_limits<NodeId>::max()} + 1) {
    throw ParseError("binary graph cache node count exceeds the 32-bit id space");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(m, 1u << 24)));
  bool weighted = false;
  for (std::uint64_t e = 0; e < m; ++e) {
    const std::uint64_t s = read_u64(in);
    const std::uint64_t d = read_u64(in);
    const double w = std::bit_cast<double>(read_u64(in));
    if (s >= n || d >= n) {
      throw ParseError("binary record " + std::to_string(e) + " references node outside [0, n)");
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ParseError("binary record " + std::to_string(e) + " has nonpositive weight");
    }
    weighted = weighted || w != 1.0;
    edges.push_back({static_cast<NodeId>(s), static_cast<NodeId>(d), w});
  }
  try {
    return DirectedGraph(static_cast<std::size_t>(n), edges, weighted);
  } catch (const std::invalid_argument& err) {
    throw ParseError(err.what());
  }
}

DirectedGraph load_graph(const std::string& path, const EdgeListOptions& options) {
  std::ifstream in = open_input(path);
  std::array<char, 5> magic{};
  in.read(magic.data(), magic.size());
  const bool binary = in.gcount() == 5 && std::memcmp(magic.data(), binary_magic, 5) == 0;
  in.clear();
  in.seekg(0);
  if (binary) {
    DirectedGraph g = read_binary_graph(in);
    if (options.node_count && *options.node_count != g.node_count()) {
      throw ParseError("--nodes does not match the node count stored in the binary cache");
    }
    return g;
  }
  return parse_edge_list(in, options);
}

PartialMarginals parse_traffic(std::istream& in, std::size_t node_count) {
  std::vector<double> c_in(node_count, 0.0), c_out(node_count, 0.0);
  std::vector<bool> seen(node_count, false);
  std::optional<bool> in_missing, out_missing;
  LineReader reader(in);
  Tokens t("");
  while (reader.next(t)) {
    const std::size_t line = reader.number();
    require_fields(t, 3, line, "node c_in c_out");
    const std::uint64_t node = parse_id(t[0], line);
    if (node >= node_count) {
      throw ParseError("unknown node id " + std::to_string(node) + " (graph has " +
                           std::to_string(node_count) + " nodes)",
                       line);
    }
    if (seen[node]) throw ParseError("node " + std::to_string(node) + " listed twice", line);
    seen[node] = true;

    const bool this_in_missing = t[1] == "-";
    const bool this_out_missing = t[2] == "-";
    if (this_in_missing && this_out_missing) {
      throw ParseError("both traffic columns are '-'", line);
    }
    if ((in_missing && *in_missing != this_in_missing) ||
        (out_missing && *out_missing != this_out_missing)) {
      throw ParseError("'-' must mark the same column on every line", line);
    }
    in_missing = this_in_missing;
    out_missing = this_out_missing;
    if (!this_in_missing) {
      c_in[node] = parse_real(t[1], line);
      if (c_in[node] < 0) throw ParseError("negative count", line);
    }
    if (!this_out_missing) {
      c_out[node] = parse_real(t[2], line);
      if (c_out[node] < 0) throw ParseError("negative count", line);
    }
  }
  PartialMarginals partial;
  if (!in_missing.value_or(false)) partial.c_in = std::move(c_in);
  if (!out_missing.value_or(false)) partial.c_out = std::move(c_out);
  return partial;
}

void write_traffic(std::ostream& out, const TrafficMarginals& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << i << '\t' << format_real(t.c_in[i]) << '\t' << format_real(t.c_out[i]) << '\n';
  }
}

TrafficMarginals load_traffic(const std::string& path, std::size_t node_count,
                              bool conserve_flow_allowed) {
  std::ifstream in = open_input(path);
  PartialMarginals partial = parse_traffic(in, node_count);
  if (partial.c_in && partial.c_out) {
    return TrafficMarginals(std::move(*partial.c_in), std::move(*partial.c_out));
  }
  if (!conserve_flow_allowed) {
    throw ParseError("traffic file '" + path +
                     "' has a '-' column; pass --conserve-flow to copy the other side");
  }
  return conserve_flow(partial);
}

void write_strengths(std::ostream& out, const StrengthVector& lambda) {
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    out << i << '\t' << format_real(lambda[i]) << '\n';
  }
}

StrengthVector parse_strengths(std::istream& in, std::size_t node_count) {
  std::vector<double> values(node_count, 0.0);
  std::vector<bool> seen(node_count, false);
  LineReader reader(in);
  Tokens t("");
  while (reader.next(t)) {
    const std::size_t line = reader.number();
    require_fields(t, 2, line, "node lambda");
    const std::uint64_t node = parse_id(t[0], line);
    if (node >= node_count) throw ParseError("unknown node id " + std::to_string(node), line);
    if (seen[node]) throw ParseError("node " + std::to_string(node) + " listed twice", line);
    seen[node] = true;
    values[node] = parse_real(t[1], line);
    if (!(values[node] > 0)) throw ParseError("strength must be positive", line);
  }
  for (std::size_t i = 0; i < node_count; ++i) {
    if (!seen[i]) throw ParseError("no strength given for node " + std::to_string(i));
  }
  return StrengthVector(std::move(values));
}

void write_transitions(std::ostream& out, const EdgeTransitionTable& table) {
  for (const Transition& t : table.entries()) {
    out << t.src << '\t' << t.dst << '\t' << format_real(t.p) << '\n';
  }
}

EdgeTransitionTable parse_transitions(std::istream& in, std::size_t node_count) {
  std::vector<Transition> entries;
  LineReader reader(in);
  Tokens t("");
  while (reader.next(t)) {
    const std::size_t line = reader.number();
    require_fields(t, 3, line, "src dst p");
    Transition tr;
    tr.src = static_cast<NodeId>(parse_id(t[0], line));
    tr.dst = static_cast<NodeId>(parse_id(t[1], line));
    if (tr.src >= node_count || tr.dst >= node_count) {
      throw ParseError("transition references unknown node", line);
    }
    tr.p = parse_real(t[2], line);
    if (tr.p < 0 || tr.p > 1) throw ParseError("probability outside [0, 1]", line);
    entries.push_back(tr);
  }
  try {
    return EdgeTransitionTable(node_count, std::move(entries));
  } catch (const std::invalid_argument& err) {
    throw ParseError(err.what());
  }
}

void write_edge_counts(std::ostream& out, const EdgeCounts& counts) {
  for (const EdgeCount& c : counts.entries()) {
    out << c.src << '\t' << c.dst << '\t' << c.count << '\n';
  }
}

EdgeCounts parse_edge_counts(std::istream& in, std::optional<std::size_t> node_count) {
  std::vector<EdgeCount> entries;
  std::size_t observed = 0;
  LineReader reader(in);
  Tokens t("");
  while (reader.next(t)) {
    const std::size_t line = reader.number();
    require_fields(t, 3, line, "src dst count");
    EdgeCount c;
    c.src = static_cast<NodeId>(parse_id(t[0], line));
    c.dst = static_cast<NodeId>(parse_id(t[1], line));
    c.count = parse_count(t[2], line);
    observed = std::max<std::size_t>(observed, std::max(c.src, c.dst) + std::size_t{1});
    entries.push_back(c);
  }
  const std::size_t n = resolve_node_count(node_count, observed);
  try {
    return EdgeCounts(n, std::move(entries));
  } catch (const std::invalid_argument& err) {
    throw ParseError(err.what());
  }
}

}  // namespace choicerank
