#pragma once

// Adaptive Simpson quadrature with interval bisection.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <type_traits>

namespace maxbound {

template <class Real>
struct QuadratureResult {
  Real value = 0;
  Real error_estimate = 0;
  std::size_t evaluations = 0;
  int max_depth_reached = 0;
  bool converged = true;
};

namespace detail {

template <class Real, class F>
struct SimpsonState {
  F& f;
  Real tol;
  int min_depth;
  int max_depth;
  QuadratureResult<Real> result;

  Real recurse(Real a, Real fa, Real m, Real fm, Real b, Real fb, Real whole, Real local_tol, int depth) {
    Real lm = (a + m) / 2;
    Real rm = (m + b) / 2;
    Real flm = f(lm);
    Real frm = f(rm);
    result.evaluations += 2;
    Real left = (m - a) / 6 * (fa + 4 * flm + fm);
    Real right = (b - m) / 6 * (fm + 4 * frm + fb);
    Real delta = left + right - whole;
    if (depth > result.max_depth_reached) result.max_depth_reached = depth;
    if ((depth >= min_depth && std::fabs(delta) <= 15 * local_tol) || depth >= max_depth) {
      if (depth >= max_depth && std::fabs(delta) > 15 * local_tol) result.converged = false;
      result.error_estimate += std::fabs(delta) / 15;
      return left + right + delta / 15;
    }
    return recurse(a, fa, lm, flm, m, fm, left, local_tol / 2, depth + 1) +
           recurse(m, fm, rm, frm, b, fb, right, local_tol / 2, depth + 1);
  }
};

}  // namespace detail

/// Integrates f over [a, b] until the local Richardson estimate is within
/// `tol` in absolute terms (split evenly across bisections).
/// Every interval is bisected at least `min_depth` times so that features
/// invisible to the first five samples are still resolved.
template <class Real, class F>
QuadratureResult<Real> adaptive_simpson(F&& f, Real a, Real b, Real tol, int min_depth = 4,
                                        int max_depth = 48) {
  if (!(tol > 0)) throw std::invalid_argument("adaptive_simpson: tol must be positive");
  if (a == b) return {};
  if (b < a) {
    auto r = adaptive_simpson<Real>(f, b, a, tol, min_depth, max_depth);
    r.value = -r.value;
    return r;
  }
  detail::SimpsonState<Real, std::remove_reference_t<F>> st{f, tol, min_depth, max_depth, {}};
  Real m = (a + b) / 2;
  Real fa = f(a);
  Real fm = f(m);
  Real fb = f(b);
  st.result.evaluations = 3;
  Real whole = (b - a) / 6 * (fa + 4 * fm + fb);
  st.result.value = st.recurse(a, fa, m, fm, b, fb, whole, tol, 1);
  return st.result;
}

}  // namespace maxbound
