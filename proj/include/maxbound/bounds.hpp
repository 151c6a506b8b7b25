#pragma once

// Closed-form constants for lower bounds on ||Mf||_p / ||f||_p.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "maxbound/gfun.hpp"

namespace maxbound {

namespace detail {
inline void check_p(long double p) {
  if (!(p > 1) || !std::isfinite(p)) throw std::domain_error("p must be a finite number > 1");
}
}  // namespace detail

/// Below this p the formulas lose accuracy; reports flag such p.
inline constexpr long double kValidatedMinP = 1.01L;

/// Uncentered (Lerner) constant (p/(p-1))^{1/p}.
inline long double lerner_constant(long double p) {
  detail::check_p(p);
  return std::pow(p / (p - 1), 1 / p);
}

/// Centered constant (p/(2(p-1)))^{1/p}, valid for 1 < p < 2.
inline long double iz_constant(long double p) {
  if (!(p > 1 && p < 2)) throw std::domain_error("iz_constant: need 1 < p < 2");
  return std::pow(p / (2 * (p - 1)), 1 / p);
}

/// (gamma_n p/(p-1))^{1/p} given gamma_n.
inline long double iterated_constant_from_gamma(long double p, long double gamma_n) {
  detail::check_p(p);
  return std::pow(gamma_n * p / (p - 1), 1 / p);
}

inline long double iterated_constant(long double p, int n) {
  if (n < 1) throw std::domain_error("iterated_constant: n must be >= 1");
  return iterated_constant_from_gamma(p, gamma(n));
}

/// gamma_n (p/(p-1))^{1/p}.
inline long double weak_chain_constant(long double p, int n) {
  if (n < 1) throw std::domain_error("weak_chain_constant: n must be >= 1");
  return gamma(n) * lerner_constant(p);
}

/// Marcinkiewicz bound 2 (c1 p/(p-1))^{1/p} on the strong (p,p) constant of
/// the centered operator, from weak (1,1) constant c1 and the L^inf bound 1.
inline long double ap_upper(long double p, long double c1 = 2) {
  detail::check_p(p);
  if (!(c1 >= 1)) throw std::domain_error("ap_upper: c1 must be >= 1");
  return 2 * std::pow(c1 * p / (p - 1), 1 / p);
}

/// epsilon with (1+eps)^p = 1 + ((A-1)/(A^n-1))^p [(gamma_n p/(p-1))^{1/p} - 1]^p,
/// or nullopt when the bracket is negative. Evaluated in log space because
/// the correction is often far below long double epsilon.
inline std::optional<long double> epsilon_from_gamma(long double p, int n, long double ap, long double gamma_n) {
  detail::check_p(p);
  if (n < 1) throw std::domain_error("epsilon_p: n must be >= 1");
  if (!(ap > 1)) throw std::domain_error("epsilon_p: A_p must be > 1");
  long double log_ratio = std::log(gamma_n * p / (p - 1)) / p;
  if (log_ratio < 0) return std::nullopt;
  long double bracket = std::expm1(log_ratio);
  if (bracket == 0) return 0.0L;
  // log((A-1)/(A^n-1)); A^n - 1 = A^n (1 - A^-n).
  long double log_q = 0;
  if (n > 1) {
    long double log_a = std::log(ap);
    log_q = std::log(ap - 1) - (n * log_a + std::log1p(-std::exp(-n * log_a)));
  }
  long double log_x = p * (log_q + std::log(bracket));
  long double x = std::exp(log_x);
  return std::expm1(std::log1p(x) / p);
}

inline std::optional<long double> epsilon_p(long double p, int n, long double ap) {
  if (n < 1) throw std::domain_error("epsilon_p: n must be >= 1");
  return epsilon_from_gamma(p, n, ap, gamma(n));
}

struct BestN {
  int n = 0;
  long double epsilon = 0;
};

namespace detail {
inline std::optional<BestN> best_from_table(long double p, long double ap, const GammaTable& table, int n_max) {
  std::optional<BestN> best;
  for (int n = 1; n <= n_max; ++n) {
    auto eps = epsilon_from_gamma(p, n, ap, table.gamma(n));
    if (!eps) continue;
    if (!best || *eps > best->epsilon) best = BestN{n, *eps};
  }
  return best;
}
}  // namespace detail

/// Largest epsilon over 1 <= n <= n_max, skipping invalid n, ties toward the
/// smaller n.
inline std::optional<BestN> best_n(long double p, long double ap, int n_max) {
  detail::check_p(p);
  if (!(ap > 1)) throw std::domain_error("best_n: A_p must be > 1");
  if (n_max < 1) throw std::domain_error("best_n: n_max must be >= 1");
  return detail::best_from_table(p, ap, build_gamma_table(n_max), n_max);
}

struct BoundsRow {
  int n = 0;
  long double gamma_n = 0;
  long double iterated = 0;
  long double weak_chain = 0;
  std::optional<long double> epsilon;
};

struct BoundsReport {
  long double p = 0;
  long double c1 = 2;
  long double lerner = 0;
  std::optional<long double> iz;
  long double ap_upper = 0;
  std::vector<BoundsRow> rows;  // n = 1 .. n_max
  std::optional<BestN> best;
  bool out_of_validated_range = false;
};

inline BoundsReport build_bounds_report(long double p, int n_max, long double c1 = 2) {
  detail::check_p(p);
  if (n_max < 1) throw std::domain_error("bounds report: n_max must be >= 1");
  BoundsReport r;
  r.p = p;
  r.c1 = c1;
  r.lerner = lerner_constant(p);
  if (p < 2) r.iz = iz_constant(p);
  r.ap_upper = ap_upper(p, c1);
  r.out_of_validated_range = p < kValidatedMinP;
  GammaTable table = build_gamma_table(n_max);
  for (int n = 1; n <= n_max; ++n) {
    BoundsRow row;
    row.n = n;
    row.gamma_n = table.gamma(n);
    row.iterated = iterated_constant_from_gamma(p, row.gamma_n);
    row.weak_chain = row.gamma_n * r.lerner;
    row.epsilon = epsilon_from_gamma(p, n, r.ap_upper, row.gamma_n);
    r.rows.push_back(row);
  }
  r.best = detail::best_from_table(p, r.ap_upper, table, n_max);
  return r;
}

}  // namespace maxbound
