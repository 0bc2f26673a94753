#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chipfire/dhar.hpp"
#include "chipfire/error.hpp"
#include "chipfire/gonality.hpp"
#include "chipfire/graph.hpp"
#include "chipfire/io.hpp"
#include "chipfire/json.hpp"
#include "chipfire/kmn.hpp"
#include "chipfire/rank.hpp"
#include "chipfire/verify.hpp"

// Command-line front end. Every command prints {status, payload, timing} as
// JSON (or a CSV table) and returns
//   0 success, 1 failed check, 2 usage or parse error, 3 resource limit.

namespace chipfire::cli {

using nlohmann::json;

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2, exit_resource = 3 };

inline int exit_code_for(Errc code) {
  switch (code) {
    case Errc::resource_limit:
      return exit_resource;
    default:
      return exit_usage;
  }
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string cell_text(const verify::Cell& c) {
  if (auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return std::get<std::string>(c);
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

inline std::string triple_list(const std::vector<GonalityTriple>& ts) {
  std::vector<std::string> parts;
  for (const auto& t : ts)
    parts.push_back(std::to_string(t.a) + "," + std::to_string(t.b) + "," + std::to_string(t.h));
  return join(parts, ";");
}

// What a command produced: a JSON payload, optionally a CSV rendering of it,
// and whether its checks passed.
struct Outcome {
  json payload = json::object();
  std::optional<std::string> csv;
  bool checks_passed = true;
};

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chip-firing, reduced divisors and gonality sequences on graphs"};
  app.require_subcommand(1);
  std::string format;
  app.add_option("--format", format, "Output format (json or csv)")
      ->check(CLI::IsMember({"json", "csv"}));

  std::function<detail::Outcome()> action;
  bool csv_default = false;

  // reduce
  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a divisor with respect to a base vertex");
  std::string graph_spec, divisor_spec, base, metric_spec;
  reduce_cmd->add_option("--graph", graph_spec, "kmn:m,n | complete:d | file:path")->required();
  reduce_cmd->add_option("--divisor", divisor_spec, "Comma-separated vertex:chips");
  reduce_cmd->add_option("--base", base, "Base vertex q")->required();
  reduce_cmd->add_option("--metric", metric_spec, "Interior chips u-w[k]@num/den:chips, comma-separated");
  reduce_cmd->callback([&] {
    action = [&] {
      detail::Outcome res;
      const auto spec = io::parse_graph_spec(graph_spec);
      const auto& g = spec.graph;
      const VertexId q = g.at(base);
      if (!metric_spec.empty()) {
        const auto md = io::parse_metric_divisor(g, divisor_spec, metric_spec);
        const auto order = find_reduction_order(g, md, q);
        res.payload["reduced"] = metric_is_reduced(g, md, q);
        res.payload["order"] = order ? serialize::vertex_names(g, *order) : json(nullptr);
        if (order) {
          std::vector<std::string> names;
          for (VertexId v : *order) names.push_back(g.name(v));
          res.csv = std::string("reduced,order\n") + (res.payload["reduced"].get<bool>() ? "true" : "false") +
                    "," + detail::csv_field(detail::join(names, ";")) + "\n";
        } else {
          res.csv = std::string("reduced,order\n") + (res.payload["reduced"].get<bool>() ? "true" : "false") + ",\n";
        }
        return res;
      }
      const auto cert = reduce(g, io::parse_divisor(g, divisor_spec), q);
      res.payload = serialize::certificate(g, cert);
      std::vector<std::string> names;
      for (VertexId v : cert.order) names.push_back(g.name(v));
      res.csv = "reduced,order\n" + detail::csv_field(io::format_divisor(g, cert.reduced)) + "," +
                detail::csv_field(detail::join(names, ";")) + "\n";
      return res;
    };
  });

  // delta
  auto* delta_cmd = app.add_subcommand("delta", "Minimum formula delta_r(m,n) on bidegree (m,n)");
  std::int64_t m = 0, n = 0, r = 0;
  bool table = false, optimal = false, slope = false;
  delta_cmd->add_option("--m", m, "First bidegree entry")->required();
  delta_cmd->add_option("--n", n, "Second bidegree entry")->required();
  auto* r_opt = delta_cmd->add_option("--r", r, "Rank");
  auto* table_flag = delta_cmd->add_flag("--table", table, "All ranks 1..g-1");
  r_opt->excludes(table_flag);
  delta_cmd->add_flag("--optimal", optimal, "Include the minimizing triples");
  delta_cmd->add_flag("--slope", slope, "Include the ranks where d_r/r < d_{r+1}/(r+1)");
  delta_cmd->callback([&] {
    if (!table && r_opt->count() == 0) throw CLI::RequiredError("--r or --table");
    csv_default = table;
    action = [&] {
      detail::Outcome res;
      res.payload["m"] = m;
      res.payload["n"] = n;
      std::ostringstream csv;
      csv << "r,delta,triples\n";
      if (table) {
        if (m < 1 || n < 1) throw Error(Errc::invalid_parameter, "bidegree entries must be positive");
        json rows = json::array();
        for (std::int64_t k = 1; k < (m - 1) * (n - 1); ++k) {
          const auto best = optimal_triples(m, n, k);
          json row = {{"r", k}, {"delta", delta(m, n, k)}};
          json ts = json::array();
          for (const auto& t : best) ts.push_back(serialize::triple(t));
          row["triples"] = std::move(ts);
          rows.push_back(std::move(row));
          csv << k << ',' << delta(m, n, k) << ',' << detail::csv_field(detail::triple_list(best)) << '\n';
        }
        res.payload["table"] = std::move(rows);
      } else {
        const auto value = delta(m, n, r);
        res.payload["r"] = r;
        res.payload["delta"] = value;
        const auto best = optimal_triples(m, n, r);
        if (optimal) {
          json ts = json::array();
          for (const auto& t : best) ts.push_back(serialize::triple(t));
          res.payload["optimal"] = std::move(ts);
        }
        csv << r << ',' << value << ',' << (optimal ? detail::csv_field(detail::triple_list(best)) : "")
            << '\n';
      }
      if (slope) {
        const auto violations = slope_scan(m, n);
        res.payload["slope_violations"] = violations;
        std::vector<std::string> parts;
        for (auto v : violations) parts.push_back(std::to_string(v));
        csv << "# slope violations: " << detail::join(parts, ";") << '\n';
      }
      res.csv = csv.str();
      return res;
    };
  });

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "Baker-Norine rank of a divisor");
  std::optional<std::uint64_t> budget;
  rank_cmd->add_option("--graph", graph_spec, "kmn:m,n | complete:d | file:path")->required();
  rank_cmd->add_option("--divisor", divisor_spec, "Comma-separated vertex:chips");
  rank_cmd->add_option("--budget", budget, "Maximum number of candidate divisors")
      ->check(CLI::PositiveNumber);
  rank_cmd->callback([&] {
    action = [&] {
      detail::Outcome res;
      const auto spec = io::parse_graph_spec(graph_spec);
      const auto& g = spec.graph;
      const Divisor d = io::parse_divisor(g, divisor_spec);
      // b chips on every v and a chips on every w, inside the range where
      // step counting is known to give the rank.
      if (spec.bipartite) {
        const auto [bm, bn] = *spec.bipartite;
        const Chips b = d[kmn::v_vertex(bm, 1)];
        const Chips a = d[kmn::w_vertex(bm, 1)];
        if (bm >= 2 && bn >= 2 && a >= 0 && b >= 0 && a <= bm - 1 && b <= bn - 1 &&
            d == kmn::ab_divisor(bm, bn, a, b)) {
          const auto dlb = kmn::dlb_rank(bm, bn, d);
          res.payload = {{"rank", dlb.rank}, {"method", "dlb"}, {"steps", dlb.steps()}};
          res.csv = "rank,method\n" + std::to_string(dlb.rank) + ",dlb\n";
          return res;
        }
      }
      Budget limit(budget.value_or(budget_from_env()));
      const auto result = rank(g, d, limit);
      res.payload = {{"rank", result.rank}, {"method", "bruteforce"}, {"candidates", limit.used()}};
      res.payload["witness"] = result.witness ? json(io::format_divisor(g, *result.witness)) : json(nullptr);
      res.csv = "rank,method\n" + std::to_string(result.rank) + ",bruteforce\n";
      return res;
    };
  });

  // gonality
  auto* gon_cmd = app.add_subcommand("gonality", "Gonality sequence d_1..d_R by exhaustive search");
  std::int64_t max_rank = 0;
  gon_cmd->add_option("--graph", graph_spec, "kmn:m,n | complete:d | file:path")->required();
  gon_cmd->add_option("--max-rank", max_rank, "Largest rank R")->required();
  gon_cmd->add_option("--budget", budget, "Maximum number of candidate divisors")
      ->check(CLI::PositiveNumber);
  gon_cmd->callback([&] {
    action = [&] {
      detail::Outcome res;
      const auto spec = io::parse_graph_spec(graph_spec);
      Budget limit(budget.value_or(budget_from_env()));
      const auto seq = gonality_sequence_search(spec.graph, max_rank, limit);
      res.payload["sequence"] = seq;
      res.payload["genus"] = spec.graph.genus();
      res.payload["candidates"] = limit.used();
      std::ostringstream csv;
      csv << "r,d_r\n";
      for (std::size_t i = 0; i < seq.size(); ++i) csv << i + 1 << ',' << seq[i] << '\n';
      res.csv = csv.str();
      return res;
    };
  });

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification sweep");
  std::string suite;
  std::int64_t max = 4;
  std::uint64_t seed = 0;
  verify_cmd->add_option("--suite", suite, "Sweep to run")
      ->required()
      ->check(CLI::IsMember(verify::suite_names()));
  verify_cmd->add_option("--max", max, "Size bound of the sweep")->capture_default_str();
  verify_cmd->add_option("--seed", seed, "Seed for randomized suites")->capture_default_str();
  verify_cmd->callback([&] {
    action = [&] {
      detail::Outcome res;
      const auto rep = verify::run_suite(suite, max, seed);
      res.payload = serialize::report(rep);
      res.checks_passed = rep.ok();
      std::ostringstream csv;
      csv << detail::join(rep.columns, ",") << '\n';
      for (const auto& row : rep.rows) {
        std::vector<std::string> cells;
        for (const auto& c : row) cells.push_back(detail::csv_field(detail::cell_text(c)));
        csv << detail::join(cells, ",") << '\n';
      }
      res.csv = csv.str();
      return res;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_usage;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  auto emit_error = [&](const std::string& code, const std::string& message) {
    err << "error: " << message << '\n';
    out << json{{"status", "error"}, {"payload", {{"code", code}, {"message", message}}}, {"timing", elapsed_ms()}}
               .dump()
        << '\n';
  };

  try {
    const auto res = action();
    const bool as_csv = format.empty() ? csv_default : format == "csv";
    if (as_csv && res.csv) {
      out << *res.csv;
    } else {
      out << json{{"status", res.checks_passed ? "ok" : "error"}, {"payload", res.payload}, {"timing", elapsed_ms()}}
                 .dump()
          << '\n';
    }
    return res.checks_passed ? exit_ok : exit_check_failed;
  } catch (const Error& e) {
    emit_error(to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return exit_check_failed;
  }
}

}  // namespace chipfire::cli
