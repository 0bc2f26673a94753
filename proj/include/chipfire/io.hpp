#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chipfire/error.hpp"
#include "chipfire/graph.hpp"
#include "chipfire/rational.hpp"

// Text formats:
//   graph file     one edge per line "u w [multiplicity]", a lone "u" declares
//                  a vertex, '#' starts a comment;
//   divisor        comma-separated "vertex:chips";
//   metric chips   comma-separated "u-w[k]@num/den:chips" (k defaults to 0,
//                  the position is measured from u).

namespace chipfire::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class Int>
Int parse_int(std::string_view text, const std::string& what) {
  text = trim(text);
  Int value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last)
    throw Error(Errc::parse_error, "expected an integer for " + what + ", got '" + std::string(text) + "'");
  return value;
}

}  // namespace detail

inline Multigraph parse_graph(std::istream& in) {
  Multigraph g;
  std::string line;
  int line_no = 0;
  auto vertex = [&](const std::string& name) {
    if (auto id = g.find(name)) return *id;
    return g.add_vertex(name);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::vector<std::string> parts;
    for (std::string tok; tokens >> tok;) parts.push_back(tok);
    if (parts.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (parts.size() > 3) throw Error(Errc::parse_error, where + ": too many fields");
    if (parts.size() == 1) {
      vertex(parts[0]);
      continue;
    }
    if (parts[0] == parts[1]) throw Error(Errc::parse_error, where + ": loops are not allowed");
    const int mult = parts.size() == 3 ? detail::parse_int<int>(parts[2], where + " multiplicity") : 1;
    if (mult < 0) throw Error(Errc::parse_error, where + ": negative multiplicity");
    const VertexId u = vertex(parts[0]);
    const VertexId w = vertex(parts[1]);
    g.add_edge(u, w, mult);
  }
  return g;
}

inline Multigraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

inline Multigraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open graph file '" + path + "'");
  return parse_graph(in);
}

/// Declares every vertex first so parsing the output keeps vertex ids.
inline std::string format_graph(const Multigraph& g) {
  std::ostringstream out;
  for (VertexId v = 0; v < g.num_vertices(); ++v) out << g.name(v) << '\n';
  for (const auto& [u, w, mult] : g.edges()) {
    out << g.name(u) << ' ' << g.name(w);
    if (mult != 1) out << ' ' << mult;
    out << '\n';
  }
  return out.str();
}

/// A graph named on the command line: "kmn:m,n", "complete:d" or
/// "file:path". `bipartite` records (m, n) for kmn specs.
struct GraphSpec {
  Multigraph graph;
  std::optional<std::pair<int, int>> bipartite;
};

inline GraphSpec parse_graph_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw Error(Errc::parse_error, "graph spec must look like kmn:m,n, complete:d or file:path");
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  GraphSpec out;
  if (kind == "kmn") {
    const auto parts = detail::split(arg, ',');
    if (parts.size() != 2) throw Error(Errc::parse_error, "kmn spec needs two sizes: kmn:m,n");
    const int m = detail::parse_int<int>(parts[0], "m");
    const int n = detail::parse_int<int>(parts[1], "n");
    out.graph = complete_bipartite(m, n);
    out.bipartite = std::make_pair(m, n);
  } else if (kind == "complete") {
    out.graph = complete_graph(detail::parse_int<int>(arg, "d"));
  } else if (kind == "file") {
    out.graph = load_graph_file(arg);
  } else {
    throw Error(Errc::parse_error, "unknown graph kind '" + kind + "'");
  }
  return out;
}

inline Divisor parse_divisor(const Multigraph& g, std::string_view text) {
  Divisor d = Divisor::zero(g);
  std::vector<char> seen(g.num_vertices(), 0);
  if (detail::trim(text).empty()) return d;
  for (auto entry : detail::split(text, ',')) {
    entry = detail::trim(entry);
    const auto colon = entry.rfind(':');
    if (colon == std::string_view::npos)
      throw Error(Errc::parse_error, "divisor entry '" + std::string(entry) + "' is not vertex:chips");
    const std::string name(detail::trim(entry.substr(0, colon)));
    const VertexId v = g.at(name);
    if (seen[v]) throw Error(Errc::parse_error, "vertex '" + name + "' listed twice");
    seen[v] = 1;
    d[v] = detail::parse_int<Chips>(entry.substr(colon + 1), "chips at " + name);
  }
  return d;
}

/// Nonzero entries only, in vertex order; the zero divisor is "".
inline std::string format_divisor(const Multigraph& g, const Divisor& d) {
  require_on(g, d);
  std::string out;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (d[v] == 0) continue;
    if (!out.empty()) out += ',';
    out += g.name(v) + ":" + std::to_string(d[v]);
  }
  return out;
}

namespace detail {

// "u-w" where vertex names may themselves contain '-': accept the unique
// split whose halves are both vertices.
inline std::pair<VertexId, VertexId> parse_edge_ends(const Multigraph& g, std::string_view text) {
  std::optional<std::pair<VertexId, VertexId>> found;
  for (std::size_t pos = text.find('-'); pos != std::string_view::npos; pos = text.find('-', pos + 1)) {
    auto u = g.find(std::string(text.substr(0, pos)));
    auto w = g.find(std::string(text.substr(pos + 1)));
    if (!u || !w) continue;
    if (found) throw Error(Errc::parse_error, "ambiguous edge '" + std::string(text) + "'");
    found = std::make_pair(*u, *w);
  }
  if (!found) throw Error(Errc::parse_error, "edge '" + std::string(text) + "' does not name two vertices");
  return *found;
}

}  // namespace detail

inline EdgeChip parse_edge_chip(const Multigraph& g, std::string_view entry) {
  entry = detail::trim(entry);
  const std::string text(entry);
  const auto at = entry.find('@');
  const auto colon = entry.rfind(':');
  if (at == std::string_view::npos || colon == std::string_view::npos || colon < at)
    throw Error(Errc::parse_error, "metric chip '" + text + "' is not u-w[k]@num/den:chips");

  std::string_view edge = entry.substr(0, at);
  int index = 0;
  if (!edge.empty() && edge.back() == ']') {
    const auto open = edge.rfind('[');
    if (open == std::string_view::npos) throw Error(Errc::parse_error, "unbalanced '[' in '" + text + "'");
    index = detail::parse_int<int>(edge.substr(open + 1, edge.size() - open - 2), "edge index");
    edge = edge.substr(0, open);
  }
  const auto [u, w] = detail::parse_edge_ends(g, edge);

  const std::string_view pos_text = entry.substr(at + 1, colon - at - 1);
  const auto slash = pos_text.find('/');
  if (slash == std::string_view::npos)
    throw Error(Errc::parse_error, "position in '" + text + "' must be num/den");
  const auto num = detail::parse_int<std::int64_t>(pos_text.substr(0, slash), "position numerator");
  const auto den = detail::parse_int<std::int64_t>(pos_text.substr(slash + 1), "position denominator");
  if (den == 0) throw Error(Errc::parse_error, "zero denominator in '" + text + "'");

  EdgeChip chip;
  chip.edge = EdgeRef{u, w, index};
  chip.position = Rational(num, den);
  chip.chips = detail::parse_int<Chips>(entry.substr(colon + 1), "chips");
  return chip;
}

inline MetricDivisor parse_metric_divisor(const Multigraph& g, std::string_view vertex_text,
                                          std::string_view metric_text) {
  std::vector<EdgeChip> points;
  if (!detail::trim(metric_text).empty())
    for (auto entry : detail::split(metric_text, ',')) points.push_back(parse_edge_chip(g, entry));
  return MetricDivisor(g, parse_divisor(g, vertex_text), std::move(points));
}

inline std::string format_edge_chip(const Multigraph& g, const EdgeChip& p) {
  return g.name(p.edge.u) + "-" + g.name(p.edge.w) + "[" + std::to_string(p.edge.index) + "]@" +
         p.position.str() + ":" + std::to_string(p.chips);
}

}  // namespace chipfire::io
