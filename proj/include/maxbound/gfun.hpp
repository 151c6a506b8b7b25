#pragma once

// The family g_n on [-1/2, inf): g_0 = 0 and
//   g_n(t) = (1 + int_0^{1+2t} g_{n-1}(u) du) / (2(1+t)),
// its closed form, the increments h_n = g_{n+1} - g_n, the constants
// gamma_n = g_n(0), and the series identity behind lim g_n = 1.
//
// Series are summed in long double. Terms behave like (e log2 / 2)^j, so large
// orders need hundreds of terms; they are evaluated in log space to avoid
// overflowing powers and factorials.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "maxbound/quadrature.hpp"

namespace maxbound {

inline constexpr long double kLn2 = 0.693147180559945309417232121458176568L;

namespace detail {

inline void check_t(long double t) {
  if (!(t >= -0.5L)) throw std::domain_error("g-family: t must be >= -1/2");
}

/// j-th summand of the closed form of g_n (also equal to h_{j-1}).
inline long double g_term(int j, long double t) {
  if (j == 1) return 1.0L / (2 + 2 * t);
  long double x = std::log1p(1 + 2 * t);  // log(2 + 2t)
  if (x == 0) return 0.0L;
  long double big_l = x + (j - 1) * kLn2;  // log(2^j (1 + t))
  long double log_mag = (j - 2) * std::log(big_l) - j * kLn2 - std::lgamma(static_cast<long double>(j));
  return x / (1 + t) * std::exp(log_mag);
}

}  // namespace detail

/// g_n(t) from the closed-form sum; g_0 = 0.
inline long double g_closed(int n, long double t) {
  if (n < 0) throw std::domain_error("g_closed: n must be >= 0");
  detail::check_t(t);
  // Ascending order; Kahan compensation keeps hundreds of terms accurate.
  long double sum = 0;
  long double comp = 0;
  for (int j = 1; j <= n; ++j) {
    long double y = detail::g_term(j, t) - comp;
    long double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

/// h_n(t) = g_{n+1}(t) - g_n(t), with h_0(-1/2) = 1 by continuity.
inline long double h_closed(int n, long double t) {
  if (n < 0) throw std::domain_error("h_closed: n must be >= 0");
  detail::check_t(t);
  return detail::g_term(n + 1, t);
}

/// g_n(t) straight from the recursion, integrating the closed form of
/// g_{n-1} by adaptive Simpson to absolute accuracy `tol`.
inline long double g_recursive(int n, long double t, long double tol) {
  if (n < 1) throw std::domain_error("g_recursive: n must be >= 1");
  detail::check_t(t);
  if (!(tol > 0)) throw std::domain_error("g_recursive: tol must be positive");
  long double integral = 0;
  if (n > 1 && t > -0.5L) {
    auto integrand = [n](long double u) { return g_closed(n - 1, u); };
    integral = adaptive_simpson<long double>(integrand, 0.0L, 1 + 2 * t, tol).value;
  }
  return (1 + integral) / (2 * (1 + t));
}

struct GammaTable {
  int max_n = 0;
  std::vector<long double> gammas;  // gammas[n-1] = gamma_n
  std::vector<long double> terms;   // terms[j-1] = (1/2) j^{j-2}/(j-1)! (log2/2)^{j-1}

  long double gamma(int n) const {
    if (n < 1 || n > max_n) throw std::out_of_range("GammaTable: n out of range");
    return gammas[static_cast<std::size_t>(n - 1)];
  }
  long double term(int j) const {
    if (j < 1 || j > max_n) throw std::out_of_range("GammaTable: j out of range");
    return terms[static_cast<std::size_t>(j - 1)];
  }
};

/// Partial sums of gamma_n = (1/2) sum_j j^{j-2}/(j-1)! (log2/2)^{j-1}, built
/// from the term ratio (log2/2)(1 + 1/j)^{j-1}.
inline GammaTable build_gamma_table(int max_n) {
  if (max_n < 1) throw std::domain_error("gamma table: max_n must be >= 1");
  GammaTable table;
  table.max_n = max_n;
  table.gammas.reserve(static_cast<std::size_t>(max_n));
  table.terms.reserve(static_cast<std::size_t>(max_n));
  const long double c = kLn2 / 2;
  long double term = 0.5L;
  long double sum = 0;
  long double comp = 0;
  for (int j = 1; j <= max_n; ++j) {
    if (j > 1) {
      long double jj = j - 1;
      term *= c * std::exp((jj - 1) * std::log1p(1 / jj));
    }
    table.terms.push_back(term);
    long double y = term - comp;
    long double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    table.gammas.push_back(sum);
  }
  return table;
}

inline long double gamma(int n) {
  if (n < 1) throw std::domain_error("gamma: n must be >= 1");
  return build_gamma_table(n).gammas.back();
}

/// Partial sum up to k = K of
///   sum_k log(2+2t) (log(2+2t) + k log 2)^{k-1} 2^{-k} / k!,
/// which converges to 2 + 2t. The k = 0 term is x * x^{-1} = 1, including the
/// limit x -> 0 at t = -1/2 where every other term vanishes.
inline long double lagrange_sum(long double t, int big_k) {
  detail::check_t(t);
  if (big_k < 0) throw std::domain_error("lagrange_sum: K must be >= 0");
  long double x = std::log1p(1 + 2 * t);
  long double sum = 1;
  long double comp = 0;
  if (x == 0) return sum;
  for (int k = 1; k <= big_k; ++k) {
    long double base = x + k * kLn2;
    long double log_mag = (k - 1) * std::log(base) - k * kLn2 - std::lgamma(static_cast<long double>(k + 1));
    long double y = x * std::exp(log_mag) - comp;
    long double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

/// 1 - (sqrt 8 / 3)^n sqrt(1 + t), the geometric lower bound on g_n for t >= 0.
inline long double inductive_lower_bound(int n, long double t) {
  return 1 - std::pow(std::sqrt(8.0L) / 3, static_cast<long double>(n)) * std::sqrt(1 + t);
}

inline bool inductive_bound_check(int n, long double t) {
  if (n < 1) throw std::domain_error("inductive_bound_check: n must be >= 1");
  if (!(t >= 0)) throw std::domain_error("inductive_bound_check: t must be >= 0");
  long double g = g_closed(n, t);
  return g >= inductive_lower_bound(n, t) - 1e-12L && g <= 1 + 1e-12L;
}

}  // namespace maxbound
