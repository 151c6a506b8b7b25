#pragma once

// Empirical (non-certified) search for step functions with small
// ||Mf||_p / ||f||_p.
//
// The ratio estimate evaluates Mf exactly at quadrature nodes in double
// precision, integrates (Mf)^p piecewise by adaptive Simpson, and adds the
// closed-form contribution of the far tails, where Mf(x) = T / (2|x - c|)
// with T the total mass and c the far end of the support.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "maxbound/bounds.hpp"
#include "maxbound/maximal.hpp"
#include "maxbound/quadrature.hpp"
#include "maxbound/random.hpp"
#include "maxbound/stepfn.hpp"

namespace maxbound {

struct RatioEstimate {
  double ratio = 0;
  double norm_mf_pow = 0;  // estimated ||Mf||_p^p
  double norm_f_pow = 0;   // ||f||_p^p
  double tail_pow = 0;     // closed-form part of ||Mf||_p^p
  double quadrature_tolerance = 0;
  double error_estimate = 0;
  std::size_t evaluations = 0;
  bool converged = true;
};

/// Beyond these points Mf is exactly T/(2(x - x_0)) (right) and
/// T/(2(x_m - x)) (left).
inline std::pair<double, double> far_field_thresholds(const BasicStepFunction<double>& f) {
  BasicPrefixIntegral<double> I(f);
  const auto& bp = f.breakpoints();
  const double total = I.total();
  const double x0 = bp.front();
  const double xm = bp.back();
  double right = xm;
  double left = x0;
  for (std::size_t j = 1; j + 1 < bp.size(); ++j) {
    double mass_right = total - I(bp[j]);
    double mass_left = I(bp[j]);
    right = std::max(right, (total * bp[j] - mass_right * x0) / (total - mass_right));
    left = std::min(left, (total * bp[j] - mass_left * xm) / (total - mass_left));
  }
  return {left, right};
}

/// Estimates ||Mf||_p / ||f||_p for the centered operator. `rel_tol` is the
/// absolute quadrature tolerance per subinterval relative to ||f||_p^p.
inline RatioEstimate estimate_ratio(const BasicStepFunction<double>& f, double p, double rel_tol = 1e-11) {
  if (f.is_zero()) throw std::invalid_argument("estimate_ratio: zero function");
  if (!(p > 1)) throw std::invalid_argument("estimate_ratio: need p > 1");
  RatioEstimate est;
  MaximalEvaluator<double> eval(f);
  const auto& bp = f.breakpoints();
  const double total = BasicPrefixIntegral<double>(f).total();
  est.norm_f_pow = static_cast<double>(lp_norm_pow(f, p));
  est.quadrature_tolerance = rel_tol * est.norm_f_pow;

  auto [left, right] = far_field_thresholds(f);
  std::vector<double> nodes;
  if (left < bp.front()) nodes.push_back(left);
  nodes.insert(nodes.end(), bp.begin(), bp.end());
  if (right > bp.back()) nodes.push_back(right);

  double integral = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i];
    const double b = nodes[i + 1];
    // Mf may jump at breakpoints; sample one-sided limits at the ends.
    const double nudge = 1e-13 * (b - a);
    auto integrand = [&](double x) {
      x = std::clamp(x, a + nudge, b - nudge);
      return std::pow(eval.centered(x), p);
    };
    auto q = adaptive_simpson<double>(integrand, a, b, est.quadrature_tolerance, 4, 40);
    integral += q.value;
    est.error_estimate += q.error_estimate;
    est.evaluations += q.evaluations;
    est.converged = est.converged && q.converged;
  }
  const double half_mass_p = std::pow(total / 2, p);
  est.tail_pow = half_mass_p * std::pow(right - bp.front(), 1 - p) / (p - 1) +
                 half_mass_p * std::pow(bp.back() - left, 1 - p) / (p - 1);
  est.norm_mf_pow = integral + est.tail_pow;
  est.ratio = std::pow(est.norm_mf_pow / est.norm_f_pow, 1 / p);
  return est;
}

inline RatioEstimate estimate_ratio(const StepFunction& f, double p, double rel_tol = 1e-11) {
  return estimate_ratio(f.convert<double>(), p, rel_tol);
}

struct SearchConfig {
  double p = 1.5;
  int pieces = 4;
  int iterations = 2000;
  std::uint64_t seed = 42;
  /// Log-scale perturbation step for widths and values.
  double width_step = 0.3;
  double value_step = 0.3;
  /// Ratio evaluations per random restart.
  int iterations_per_restart = 250;
  double quadrature_rel_tol = 1e-11;
  /// Floor parameters (1 + eps_p uses ap_upper(p, c1) and n <= n_max).
  double c1 = 2;
  int n_max = 500;
};

struct SearchTracePoint {
  int iteration = 0;
  int restart = 0;
  double ratio = 0;  // best ratio so far
};

struct SearchResult {
  StepFunction best;
  std::vector<double> best_widths;
  std::vector<double> best_values;
  double min_ratio = std::numeric_limits<double>::infinity();
  RatioEstimate best_estimate;
  std::vector<SearchTracePoint> trace;
  double floor = 1;               // max(1 + eps_p, iz constant when p < 2)
  double one_plus_epsilon = 1;
  std::optional<double> iz;
  bool above_floor = true;
  int evaluations = 0;
  int restarts = 0;
};

namespace detail {
inline BasicStepFunction<double> step_from_params(const std::vector<double>& widths, const std::vector<double>& values) {
  std::vector<double> bp{0.0};
  for (double w : widths) bp.push_back(bp.back() + w);
  return BasicStepFunction<double>(std::move(bp), values);
}
}  // namespace detail

/// Random restarts plus coordinate-wise log-normal perturbations, accepting
/// strict improvements. Deterministic for a given config.
inline SearchResult extremal_search(const SearchConfig& cfg) {
  if (cfg.pieces < 1) throw std::invalid_argument("extremal_search: pieces must be >= 1");
  if (cfg.iterations < 1) throw std::invalid_argument("extremal_search: iterations must be >= 1");
  if (!(cfg.p > 1)) throw std::invalid_argument("extremal_search: need p > 1");
  if (cfg.iterations_per_restart < 1) throw std::invalid_argument("extremal_search: bad restart length");

  SearchResult res;
  Rng rng(cfg.seed);
  const std::size_t n = static_cast<std::size_t>(cfg.pieces);
  std::vector<double> widths(n);
  std::vector<double> values(n);
  double current = 0;
  double width_step = cfg.width_step;
  double value_step = cfg.value_step;

  auto evaluate = [&](const std::vector<double>& w, const std::vector<double>& v) {
    ++res.evaluations;
    return estimate_ratio(detail::step_from_params(w, v), cfg.p, cfg.quadrature_rel_tol);
  };
  auto consider = [&](const RatioEstimate& e, int iteration) {
    if (e.ratio < res.min_ratio) {
      res.min_ratio = e.ratio;
      res.best_estimate = e;
      res.best_widths = widths;
      res.best_values = values;
      res.trace.push_back({iteration, res.restarts, e.ratio});
    }
  };

  for (int it = 0; it < cfg.iterations; ++it) {
    if (it % cfg.iterations_per_restart == 0) {
      ++res.restarts;
      for (auto& w : widths) w = 0.1 + 0.9 * uniform01(rng);
      for (auto& v : values) v = 0.1 + 0.9 * uniform01(rng);
      width_step = cfg.width_step;
      value_step = cfg.value_step;
      auto e = evaluate(widths, values);
      current = e.ratio;
      consider(e, it);
      continue;
    }
    // Coordinates 0..n-1 are widths, n..2n-1 values. A single piece is scale
    // and translation invariant, so there is nothing to move.
    std::size_t coord = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(2 * n) - 1));
    bool is_width = coord < n;
    double& slot = is_width ? widths[coord] : values[coord - n];
    double& step = is_width ? width_step : value_step;
    const double saved = slot;
    slot = saved * std::exp(step * standard_normal(rng));
    auto e = evaluate(widths, values);
    if (e.ratio < current) {
      current = e.ratio;
      step = std::min(1.0, step * 1.2);
      consider(e, it);
    } else {
      slot = saved;
      step = std::max(1e-3, step * 0.97);
    }
  }

  std::vector<Rational> bp{Rational(0)};
  for (double w : res.best_widths) bp.push_back(bp.back() + from_double(w));
  std::vector<Rational> vals;
  for (double v : res.best_values) vals.push_back(from_double(v));
  res.best = StepFunction(std::move(bp), std::move(vals));

  auto best = best_n(cfg.p, ap_upper(cfg.p, cfg.c1), cfg.n_max);
  res.one_plus_epsilon = 1 + static_cast<double>(best ? best->epsilon : 0.0L);
  res.floor = res.one_plus_epsilon;
  if (cfg.p < 2) {
    res.iz = static_cast<double>(iz_constant(cfg.p));
    res.floor = std::max(res.floor, *res.iz);
  }
  res.above_floor = res.min_ratio >= res.floor;
  return res;
}

}  // namespace maxbound
