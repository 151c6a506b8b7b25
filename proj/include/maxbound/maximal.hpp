#pragma once

// Exact pointwise evaluation of the centered, left and uncentered maximal
// functions of a step function, and certified step-function lower envelopes
// for iterates of the centered operator.
//
// For a step function the average over [x - r, x + r] is, between radii at
// which an endpoint crosses a breakpoint, of the form beta/2 + alpha/(2r) and
// hence monotone; the supremum is a maximum over crossing radii plus the
// small-radius limit. The left and uncentered cases reduce the same way.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "maxbound/parallel.hpp"
#include "maxbound/rational.hpp"
#include "maxbound/stepfn.hpp"

namespace maxbound {

enum class MaximalKind { Centered, Left, Uncentered };

inline std::string_view to_string(MaximalKind k) {
  switch (k) {
    case MaximalKind::Centered: return "centered";
    case MaximalKind::Left: return "left";
    case MaximalKind::Uncentered: return "uncentered";
  }
  return "?";
}

template <class Scalar>
class MaximalEvaluator {
 public:
  explicit MaximalEvaluator(BasicStepFunction<Scalar> f) : f_(std::move(f)), integral_(f_) {}

  const BasicStepFunction<Scalar>& function() const { return f_; }

  Scalar operator()(const Scalar& x, MaximalKind kind) const {
    switch (kind) {
      case MaximalKind::Centered: return centered(x);
      case MaximalKind::Left: return left(x);
      case MaximalKind::Uncentered: return uncentered(x);
    }
    throw std::logic_error("unknown maximal kind");
  }

  Scalar centered(const Scalar& x) const {
    // Small-radius limit: mean of the one-sided values.
    Scalar best((f_.left_limit(x) + f_.right_limit(x)) / 2);
    for (const auto& xj : f_.breakpoints()) {
      Scalar r(xj < x ? Scalar(x - xj) : Scalar(xj - x));
      if (r == 0) continue;
      Scalar avg((integral_(Scalar(x + r)) - integral_(Scalar(x - r))) / (2 * r));
      if (best < avg) best = avg;
    }
    return best;
  }

  Scalar left(const Scalar& x) const {
    Scalar best(f_.left_limit(x));
    Scalar ix = integral_(x);
    for (const auto& xj : f_.breakpoints()) {
      if (!(xj < x)) break;
      Scalar avg((ix - integral_(xj)) / (x - xj));
      if (best < avg) best = avg;
    }
    return best;
  }

  Scalar uncentered(const Scalar& x) const {
    Scalar best(f_.left_limit(x));
    Scalar right = f_.right_limit(x);
    if (best < right) best = right;
    std::vector<Scalar> us{x};
    std::vector<Scalar> vs{x};
    for (const auto& xj : f_.breakpoints()) {
      if (xj < x) us.push_back(xj);
      if (x < xj) vs.push_back(xj);
    }
    std::vector<Scalar> iu;
    std::vector<Scalar> iv;
    for (const auto& u : us) iu.push_back(integral_(u));
    for (const auto& v : vs) iv.push_back(integral_(v));
    for (std::size_t a = 0; a < us.size(); ++a)
      for (std::size_t b = 0; b < vs.size(); ++b) {
        if (!(us[a] < vs[b])) continue;
        Scalar avg((iv[b] - iu[a]) / (vs[b] - us[a]));
        if (best < avg) best = avg;
      }
    return best;
  }

 private:
  BasicStepFunction<Scalar> f_;
  BasicPrefixIntegral<Scalar> integral_;
};

template <class Scalar>
Scalar eval_point(const BasicStepFunction<Scalar>& f, const Scalar& x, MaximalKind kind) {
  return MaximalEvaluator<Scalar>(f)(x, kind);
}

inline Rational eval_point(const StepFunction& f, double x, MaximalKind kind) {
  return eval_point(f, from_double(x), kind);
}

/// Closed forms for f = indicator of [0, 1]. At the breakpoints 0 and 1 the
/// centered value is the one-sided mean 1/2.
inline long double indicator_oracle(long double x, MaximalKind kind) {
  switch (kind) {
    case MaximalKind::Centered:
      if (x == 0 || x == 1) return 0.5L;
      if (x > 0 && x < 1) return 1.0L;
      if (x > 1) return 1.0L / (2 * x);
      return 1.0L / (2 * (1 - x));
    case MaximalKind::Left:
      if (x <= 0) return 0.0L;
      if (x <= 1) return 1.0L;
      return 1.0L / x;
    case MaximalKind::Uncentered:
      if (x >= 0 && x <= 1) return 1.0L;
      if (x > 1) return 1.0L / x;
      return 1.0L / (1 - x);
  }
  throw std::logic_error("unknown maximal kind");
}

// ---------------------------------------------------------------------------
// Grids

struct GridSpec {
  Rational width{1, 256};
  /// Uniform region extends this far beyond the support; defaults to the
  /// support width.
  std::optional<Rational> margin;
  /// Beyond the uniform region [lo, hi], nodes sit at hi + margin * (2^i * (1 + j/K) - 1)
  /// and symmetrically below lo.
  int tail_octaves = 6;
  int tail_per_octave = 16;

  /// Halves the width and doubles the tail density; node sets are nested.
  GridSpec refined() const {
    GridSpec g = *this;
    g.width /= 2;
    g.tail_per_octave *= 2;
    return g;
  }
};

using Grid = std::vector<Rational>;

inline Grid uniform_grid(const Rational& lo, const Rational& hi, const Rational& width) {
  if (!(lo < hi) || !(width > 0)) throw std::invalid_argument("uniform_grid: bad range or width");
  Grid g;
  for (Rational x = lo; x < hi; x += width) g.push_back(x);
  g.push_back(hi);
  return g;
}

/// Uniform core of the given width around supp f, geometric tails, and the
/// breakpoints of f.
inline Grid make_grid(const StepFunction& f, const GridSpec& spec) {
  if (f.is_zero()) throw std::invalid_argument("make_grid: zero function has no support");
  if (!(spec.width > 0)) throw std::invalid_argument("make_grid: width must be positive");
  if (spec.tail_octaves < 0 || spec.tail_per_octave < 1)
    throw std::invalid_argument("make_grid: bad tail parameters");
  Rational support = f.support_hi() - f.support_lo();
  Rational margin = spec.margin.value_or(support);
  if (margin < 0) throw std::invalid_argument("make_grid: negative margin");
  Rational lo = f.support_lo() - margin;
  Rational hi = f.support_hi() + margin;
  Grid g = uniform_grid(lo, hi, spec.width);
  for (const auto& b : f.breakpoints()) g.push_back(b);
  if (margin > 0) {
    for (int i = 0; i < spec.tail_octaves; ++i) {
      Rational octave = margin;
      octave *= Rational(mpz_class(1) << i);
      for (int j = 0; j < spec.tail_per_octave; ++j) {
        if (i == 0 && j == 0) continue;
        Rational d = octave * (1 + ratio(j, spec.tail_per_octave)) - margin;
        g.push_back(hi + d);
        g.push_back(lo - d);
      }
    }
    Rational far = margin * Rational(mpz_class(1) << spec.tail_octaves) - margin;
    if (spec.tail_octaves > 0) {
      g.push_back(hi + far);
      g.push_back(lo - far);
    }
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

// ---------------------------------------------------------------------------
// Certified lower envelopes

/// envelope <= M^order(base) at every point strictly inside a grid cell.
struct CertifiedLowerStep {
  int order = 0;
  StepFunction base;
  /// Certified lower bound for M^(order-1) base (base itself when order == 1).
  StepFunction predecessor;
  StepFunction envelope;
  Grid grid;

  /// A certified lower bound for M^order(base)(x) at any x: the envelope
  /// value inside a cell, otherwise the exact centered maximal function of
  /// the predecessor (valid by monotonicity of M).
  Rational lower_bound_at(const Rational& x) const {
    if (!grid.empty() && grid.front() < x && x < grid.back() &&
        !std::binary_search(grid.begin(), grid.end(), x))
      return envelope.right_limit(x);
    return MaximalEvaluator<Rational>(predecessor).centered(x);
  }
};

/// Bits kept when rounding envelope values down to dyadic rationals; keeps
/// denominators bounded under iteration.
inline constexpr unsigned kEnvelopeBits = 48;

namespace detail {

inline void check_grid(const StepFunction& g, const Grid& grid) {
  if (grid.size() < 2) throw std::invalid_argument("certified_lower: grid needs at least two nodes");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i - 1] < grid[i]))
      throw std::invalid_argument("certified_lower: grid must be strictly increasing");
  if (g.is_zero()) return;
  if (g.support_lo() < grid.front() || grid.back() < g.support_hi())
    throw std::invalid_argument("certified_lower: grid does not cover the support");
  for (const auto& b : g.breakpoints())
    if (!std::binary_search(grid.begin(), grid.end(), b))
      throw std::invalid_argument("certified_lower: grid does not refine the breakpoints");
}

}  // namespace detail

/// Cellwise lower bound for M g. For a cell [a, b] and r >= b - a, the ball of
/// radius r around any point of the cell contains [b - r, a + r], so
/// (I(a + r) - I(b - r)) / (2r) bounds M g from below on the whole cell. The
/// supremum over r >= b - a of that quantity is attained at r = b - a or at a
/// radius where a + r or b - r crosses a breakpoint of g; the envelope takes
/// that maximum, maxed with g's own value on the cell, and rounds down to a
/// multiple of 2^-48.
///
/// Candidates are screened in double precision and the winner is recomputed
/// exactly, so every stored value is an exact lower bound.
inline CertifiedLowerStep certified_lower(const StepFunction& g, const Grid& grid, unsigned threads = 1) {
  detail::check_grid(g, grid);
  const std::size_t cells = grid.size() - 1;
  CertifiedLowerStep out;
  out.order = 1;
  out.base = g;
  out.predecessor = g;
  out.grid = grid;
  if (g.is_zero()) return out;

  std::vector<Rational> cell_value(cells);
  for (std::size_t k = 0; k < cells; ++k) cell_value[k] = g.right_limit(grid[k]);

  std::vector<double> xs(grid.size());
  std::vector<double> cum(grid.size());
  std::vector<double> vals(cells);
  {
    Rational acc = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      xs[k] = grid[k].get_d();
      cum[k] = acc.get_d();
      if (k < cells) {
        vals[k] = cell_value[k].get_d();
        acc += cell_value[k] * (grid[k + 1] - grid[k]);
      }
    }
  }
  const double total = cum.back();

  // Node indices that are breakpoints of g.
  std::vector<std::size_t> events;
  {
    std::size_t j = 0;
    const auto& bp = g.breakpoints();
    for (std::size_t k = 0; k < grid.size() && j < bp.size(); ++k)
      if (grid[k] == bp[j]) {
        events.push_back(k);
        ++j;
      }
  }

  auto interp = [&](double x, std::size_t hint) {
    // hint: index k with xs[k] <= x < xs[k+1] or an end.
    if (x <= xs.front()) return 0.0;
    if (x >= xs.back()) return total;
    return cum[hint] + vals[hint] * (x - xs[hint]);
  };

  PrefixIntegral exact_integral(g);
  std::vector<Rational> env(cells);

  parallel_for(cells, [&](std::size_t k) {
    const double a = xs[k];
    const double b = xs[k + 1];

    // Baseline is g's value on the cell (it also dominates r = b - a, whose
    // average is half of it); best_node < 0 means nothing beat it.
    long best_node = -1;
    double best = vals[k];

    // Left events: nodes <= a, r = b - x; right events: nodes >= b, r = x - a.
    auto split = std::lower_bound(events.begin(), events.end(), k + 1);
    std::ptrdiff_t li = (split - events.begin()) - 1;
    std::size_t ri = static_cast<std::size_t>(split - events.begin());
    // Pointers for a + r (moves right) and b - r (moves left).
    std::size_t up = k;
    std::size_t down = k;
    while (li >= 0 || ri < events.size()) {
      double rl = li >= 0 ? b - xs[events[static_cast<std::size_t>(li)]] : std::numeric_limits<double>::infinity();
      double rr = ri < events.size() ? xs[events[ri]] - a : std::numeric_limits<double>::infinity();
      bool take_left = rl <= rr;
      double r = take_left ? rl : rr;
      if (total / (2 * r) <= best) break;
      std::size_t node = take_left ? events[static_cast<std::size_t>(li)] : events[ri];
      if (take_left) --li; else ++ri;
      double hi_x = a + r;
      double lo_x = b - r;
      while (up + 1 < xs.size() && xs[up + 1] <= hi_x) ++up;
      while (down > 0 && xs[down] > lo_x) --down;
      double val = (interp(hi_x, std::min(up, cells - 1)) - interp(lo_x, down)) / (2 * r);
      if (val > best) {
        best = val;
        best_node = static_cast<long>(node);
      }
    }

    Rational value = cell_value[k];
    if (best_node >= 0) {
      const Rational& ea = grid[k];
      const Rational& eb = grid[k + 1];
      const Rational& xn = grid[static_cast<std::size_t>(best_node)];
      Rational r = xn < eb ? Rational(eb - xn) : Rational(xn - ea);
      Rational cand = (exact_integral(Rational(ea + r)) - exact_integral(Rational(eb - r))) / (2 * r);
      if (value < cand) value = cand;
    }
    env[k] = floor_dyadic(value, kEnvelopeBits);
  }, threads);

  out.envelope = StepFunction(grid, std::move(env));
  return out;
}

/// Certified lower bound for ||M^order base||_p^p: the envelope's own
/// integral plus the tails outside the grid [A, B]. The predecessor g has
/// mass T on [L, H]; for x > B the ball of radius x - L around x holds all of
/// it, so M g(x) >= T / (2(x - L)), whose p-th power integrates over (B, oo)
/// to (T/2)^p (B - L)^{1-p} / (p - 1). The left tail is symmetric.
inline long double certified_lp_norm_pow(const CertifiedLowerStep& step, long double p) {
  long double inner = lp_norm_pow(step.envelope, p);
  if (step.predecessor.is_zero() || step.grid.size() < 2) return inner;
  long double mass = to_long_double(BasicPrefixIntegral<Rational>(step.predecessor).total());
  long double right = to_long_double(step.grid.back() - step.predecessor.support_lo());
  long double left = to_long_double(step.predecessor.support_hi() - step.grid.front());
  long double scale = std::pow(mass / 2, p) / (p - 1);
  return inner + scale * (std::pow(right, 1 - p) + std::pow(left, 1 - p));
}

inline long double certified_lp_norm_p(const CertifiedLowerStep& step, long double p) {
  return std::pow(certified_lp_norm_pow(step, p), 1 / p);
}

/// Certificates of orders 1..n on a fixed grid; element k-1 has order k.
inline std::vector<CertifiedLowerStep> certified_chain(const StepFunction& f, int n, const Grid& grid,
                                                       unsigned threads = 1) {
  if (n < 1) throw std::invalid_argument("iterate_certified: order must be >= 1");
  std::vector<CertifiedLowerStep> chain;
  chain.reserve(static_cast<std::size_t>(n));
  StepFunction current = f;
  for (int k = 1; k <= n; ++k) {
    CertifiedLowerStep step = certified_lower(current, grid, threads);
    step.order = k;
    step.base = f;
    current = step.envelope;
    chain.push_back(std::move(step));
  }
  return chain;
}

inline CertifiedLowerStep iterate_certified(const StepFunction& f, int n, const Grid& grid, unsigned threads = 1) {
  return std::move(certified_chain(f, n, grid, threads).back());
}

}  // namespace maxbound
