#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "chipfire/dhar.hpp"
#include "chipfire/gonality.hpp"
#include "chipfire/graph.hpp"
#include "chipfire/io.hpp"
#include "chipfire/kmn.hpp"
#include "chipfire/verify.hpp"

// JSON views of library results. Divisors are written in the text syntax
// ("v1:1,v2:1") and vertices by name.

namespace chipfire::serialize {

using nlohmann::json;

inline json vertex_names(const Multigraph& g, const std::vector<VertexId>& vs) {
  json out = json::array();
  for (VertexId v : vs) out.push_back(g.name(v));
  return out;
}

/// {reduced, script, order}; a step fired k times appears k times in script.
inline json certificate(const Multigraph& g, const ReductionCertificate& cert) {
  json script = json::array();
  for (const auto& step : cert.script)
    for (Chips k = 0; k < step.times; ++k) script.push_back(vertex_names(g, step.set));
  return {{"reduced", io::format_divisor(g, cert.reduced)},
          {"script", std::move(script)},
          {"order", vertex_names(g, cert.order)}};
}

inline json triple(const GonalityTriple& t) {
  return {{"a", t.a}, {"b", t.b}, {"h", t.h}, {"degree", t.degree}, {"rank", t.rank}};
}

inline json claim(const kmn::ClaimResult& c) {
  json out = {{"t1", c.t1}, {"t2", c.t2}, {"r", c.r}, {"holds", c.holds}, {"easy_case", c.easy_case}};
  if (c.easy_case) {
    out["gap"] = c.gap;
    out["gap_mn"] = c.gap_mn;
    out["gap_nn"] = c.gap_nn;
  }
  return out;
}

inline json cell(const verify::Cell& c) {
  return std::visit([](const auto& v) { return json(v); }, c);
}

/// {suite, checked, failures, notes, columns, rows}; rows are arrays in
/// column order.
inline json report(const verify::SuiteReport& rep) {
  json rows = json::array();
  for (const auto& row : rep.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(cell(c));
    rows.push_back(std::move(r));
  }
  return {{"suite", rep.suite},     {"checked", rep.checked}, {"failures", rep.failures},
          {"notes", rep.notes},     {"columns", rep.columns}, {"rows", std::move(rows)}};
}

}  // namespace chipfire::serialize
