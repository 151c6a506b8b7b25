#pragma once

// CSV and JSON emission. Every artifact carries the tool version, the seed
// and a hash of the effective configuration; JSON reports also carry a
// timestamp, which is not part of the hash.

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "maxbound/bounds.hpp"
#include "maxbound/config.hpp"
#include "maxbound/gfun.hpp"
#include "maxbound/search.hpp"
#include "maxbound/verify.hpp"

namespace maxbound {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;

inline std::string format_real(long double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(18) << x;
  return os.str();
}

inline std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline std::string csv_preamble(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# maxbound " << kVersion << " seed=" << (cfg.has("seed") ? cfg.get("seed") : "-")
     << " config_hash=" << cfg.hash() << "\n# config:";
  for (const auto& [k, v] : cfg.values()) os << ' ' << k << '=' << v;
  os << '\n';
  return os.str();
}

inline json json_header(const RunConfig& cfg, const std::string& command, const std::string& timestamp) {
  json j;
  j["tool"] = "maxbound";
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = cfg.has("seed") ? cfg.get("seed") : "";
  j["config_hash"] = cfg.hash();
  json c = json::object();
  for (const auto& [k, v] : cfg.values()) c[k] = v;
  j["config"] = c;
  j["timestamp"] = timestamp;
  return j;
}

/// Finite reals as numbers, infinities as strings.
inline json real_json(long double x) {
  if (!std::isfinite(x)) return json(format_real(x));
  return json(static_cast<double>(x));
}

// ---------------------------------------------------------------------------
// gamma and g_n tables

inline std::string gamma_csv(int n_max, const RunConfig& cfg) {
  GammaTable table = build_gamma_table(n_max);
  std::ostringstream os;
  os << csv_preamble(cfg) << "n,gamma_n,term_n,g_closed_at_0,lower_bound_at_0\n";
  for (int n = 1; n <= n_max; ++n)
    os << n << ',' << format_real(table.gamma(n)) << ',' << format_real(table.term(n)) << ','
       << format_real(g_closed(n, 0)) << ',' << format_real(inductive_lower_bound(n, 0)) << '\n';
  return os.str();
}

inline std::string gn_table_csv(int n_max, long double t_min, long double t_max, int t_points, const RunConfig& cfg) {
  std::ostringstream os;
  os << csv_preamble(cfg) << "n,t,g_closed,h_closed,inductive_lower_bound\n";
  for (int n = 0; n <= n_max; ++n)
    for (int i = 0; i < t_points; ++i) {
      long double t = t_points == 1 ? t_min : t_min + (t_max - t_min) * i / (t_points - 1);
      os << n << ',' << format_real(t) << ',' << format_real(g_closed(n, t)) << ',' << format_real(h_closed(n, t))
         << ',' << (n >= 1 && t >= 0 ? format_real(inductive_lower_bound(n, t)) : std::string()) << '\n';
    }
  return os.str();
}

// ---------------------------------------------------------------------------
// Constants

inline std::string constants_csv(std::span<const BoundsReport> reports, const RunConfig& cfg) {
  std::ostringstream os;
  os << csv_preamble(cfg)
     << "row,p,n,gamma_n,iterated,weak_chain,epsilon,lerner,iz,ap_upper,c1,best_n,best_epsilon,flag\n";
  for (const auto& r : reports) {
    std::string iz = r.iz ? format_real(*r.iz) : std::string();
    std::string flag = r.out_of_validated_range ? "out_of_validated_range" : "";
    for (const auto& row : r.rows)
      os << "detail," << format_real(r.p) << ',' << row.n << ',' << format_real(row.gamma_n) << ','
         << format_real(row.iterated) << ',' << format_real(row.weak_chain) << ','
         << (row.epsilon ? format_real(*row.epsilon) : std::string("invalid")) << ",,,,,,," << flag << '\n';
    os << "summary," << format_real(r.p) << ",,,,,," << format_real(r.lerner) << ',' << iz << ','
       << format_real(r.ap_upper) << ',' << format_real(r.c1) << ','
       << (r.best ? std::to_string(r.best->n) : std::string()) << ','
       << (r.best ? format_real(r.best->epsilon) : std::string()) << ',' << flag << '\n';
  }
  return os.str();
}

inline json constants_json(std::span<const BoundsReport> reports, const RunConfig& cfg, const std::string& timestamp) {
  json j = json_header(cfg, "constants", timestamp);
  json arr = json::array();
  for (const auto& r : reports) {
    json e;
    e["p"] = real_json(r.p);
    e["c1"] = real_json(r.c1);
    e["lerner"] = real_json(r.lerner);
    e["iz"] = r.iz ? real_json(*r.iz) : json(nullptr);
    e["ap_upper"] = real_json(r.ap_upper);
    e["best_n"] = r.best ? json(r.best->n) : json(nullptr);
    e["best_epsilon"] = r.best ? real_json(r.best->epsilon) : json(nullptr);
    e["out_of_validated_range"] = r.out_of_validated_range;
    json rows = json::array();
    for (const auto& row : r.rows) {
      json x;
      x["n"] = row.n;
      x["gamma_n"] = real_json(row.gamma_n);
      x["iterated"] = real_json(row.iterated);
      x["weak_chain"] = real_json(row.weak_chain);
      x["epsilon"] = row.epsilon ? real_json(*row.epsilon) : json("invalid");
      rows.push_back(std::move(x));
    }
    e["rows"] = std::move(rows);
    arr.push_back(std::move(e));
  }
  j["reports"] = std::move(arr);
  return j;
}

// ---------------------------------------------------------------------------
// Verification

inline json outcome_json(const VerifyOutcome& o) {
  json j;
  j["status"] = std::string(to_string(o.status));
  j["margin"] = real_json(o.margin);
  j["grid_width"] = o.grid_width ? json(to_string(*o.grid_width)) : json(nullptr);
  j["refinement_depth"] = o.refinement_depth;
  j["comparisons"] = o.comparisons;
  if (o.witness) {
    j["witness"] = {{"location", o.witness->location}, {"lhs", real_json(o.witness->lhs)},
                    {"rhs", real_json(o.witness->rhs)}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline json summary_json(const SuiteSummary& s) {
  return json{{"checks", s.checks},
              {"pass_first", s.pass_first},
              {"pass_final", s.pass_final},
              {"inconclusive", s.inconclusive_final},
              {"violations", s.violations},
              {"max_refinement_depth", s.max_depth_used},
              {"min_margin_first", real_json(s.min_margin)}};
}

inline json verify_json(const SuiteResult& result, std::span<const Suite> suites, const RunConfig& cfg,
                        const std::string& timestamp, const std::vector<std::string>& warnings = {}) {
  json j = json_header(cfg, "verify", timestamp);
  json names = json::array();
  for (Suite s : suites) names.push_back(std::string(to_string(s)));
  j["suites"] = names;
  j["warnings"] = warnings;
  json summaries = json::object();
  for (Suite s : suites) summaries[std::string(to_string(s))] = summary_json(result.summary(s));
  j["summary"] = summaries;
  json failures = json::array();
  json checks = json::array();
  for (const auto& r : result.records) {
    json c;
    c["suite"] = std::string(to_string(r.suite));
    c["function"] = r.function_label;
    c["n"] = r.n;
    c["parameter"] = r.parameter;
    c["first"] = outcome_json(r.outcome.first);
    c["final"] = outcome_json(r.outcome.final);
    if (r.outcome.final.status != VerifyStatus::CertifiedPass)
      failures.push_back(c["function"].get<std::string>() + ": " + format_stepfn(result.corpus[r.function_index]));
    checks.push_back(std::move(c));
  }
  j["checks"] = std::move(checks);
  j["unresolved_functions"] = std::move(failures);
  return j;
}

// ---------------------------------------------------------------------------
// Search

inline json search_json(const SearchResult& r, const SearchConfig& sc, const RunConfig& cfg,
                        const std::string& timestamp) {
  json j = json_header(cfg, "search", timestamp);
  j["label"] = "empirical";
  j["certified"] = false;
  j["p"] = sc.p;
  j["pieces"] = sc.pieces;
  j["iterations"] = sc.iterations;
  j["min_ratio"] = r.min_ratio;
  j["floor"] = r.floor;
  j["one_plus_epsilon"] = r.one_plus_epsilon;
  j["iz"] = r.iz ? json(*r.iz) : json(nullptr);
  j["above_floor"] = r.above_floor;
  j["best_function"] = format_stepfn(r.best);
  j["best_widths"] = r.best_widths;
  j["best_values"] = r.best_values;
  j["quadrature"] = {{"method", "adaptive-simpson"},
                     {"tolerance", r.best_estimate.quadrature_tolerance},
                     {"error_estimate", r.best_estimate.error_estimate},
                     {"evaluations", r.best_estimate.evaluations},
                     {"converged", r.best_estimate.converged},
                     {"closed_form_tail", r.best_estimate.tail_pow}};
  j["evaluations"] = r.evaluations;
  j["restarts"] = r.restarts;
  json trace = json::array();
  for (const auto& t : r.trace) trace.push_back({{"iteration", t.iteration}, {"restart", t.restart}, {"ratio", t.ratio}});
  j["trace"] = std::move(trace);
  return j;
}

/// Dump with the timestamp removed; identical runs give identical strings.
inline std::string dump_without_timestamp(json j) {
  j.erase("timestamp");
  return j.dump();
}

}  // namespace maxbound
