#pragma once

// Compactly supported, nonnegative, piecewise-constant functions on the line
// together with their exact antiderivative and measure primitives.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "maxbound/rational.hpp"

namespace maxbound {

template <class Scalar>
class BasicStepFunction {
 public:
  /// The zero function.
  BasicStepFunction() = default;

  /// Validates and canonicalizes: adjacent equal values are merged and zero
  /// pieces at either end are dropped.
  BasicStepFunction(std::vector<Scalar> breakpoints, std::vector<Scalar> values) {
    if (breakpoints.empty() && values.empty()) return;
    if (breakpoints.size() != values.size() + 1)
      throw std::invalid_argument("step function: need exactly one more breakpoint than values");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
      if (!(breakpoints[i - 1] < breakpoints[i]))
        throw std::invalid_argument("step function: breakpoints must be strictly increasing");
    for (const auto& v : values)
      if (v < 0) throw std::invalid_argument("step function: negative value");

    std::vector<Scalar> bp;
    std::vector<Scalar> vals;
    bp.reserve(breakpoints.size());
    vals.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!vals.empty() && vals.back() == values[i]) {
        bp.back() = breakpoints[i + 1];
        continue;
      }
      if (bp.empty()) bp.push_back(breakpoints[i]);
      vals.push_back(values[i]);
      bp.push_back(breakpoints[i + 1]);
    }
    std::size_t lo = 0;
    std::size_t hi = vals.size();
    while (lo < hi && vals[lo] == 0) ++lo;
    while (hi > lo && vals[hi - 1] == 0) --hi;
    if (lo == hi) return;
    breaks_.assign(bp.begin() + static_cast<std::ptrdiff_t>(lo),
                   bp.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    values_.assign(vals.begin() + static_cast<std::ptrdiff_t>(lo),
                   vals.begin() + static_cast<std::ptrdiff_t>(hi));
  }

  const std::vector<Scalar>& breakpoints() const { return breaks_; }
  const std::vector<Scalar>& values() const { return values_; }
  std::size_t pieces() const { return values_.size(); }
  bool is_zero() const { return values_.empty(); }

  const Scalar& support_lo() const { return breaks_.front(); }
  const Scalar& support_hi() const { return breaks_.back(); }

  /// Index i such that x lies in [x_i, x_{i+1}), or npos outside [x_0, x_m).
  std::size_t piece_index(const Scalar& x) const {
    if (is_zero() || x < breaks_.front() || !(x < breaks_.back())) return npos;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
  }

  /// f(x+) and f(x-); these coincide away from breakpoints.
  Scalar right_limit(const Scalar& x) const {
    std::size_t i = piece_index(x);
    return i == npos ? Scalar(0) : values_[i];
  }
  Scalar left_limit(const Scalar& x) const {
    if (is_zero() || !(breaks_.front() < x) || breaks_.back() < x) return Scalar(0);
    auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
  }

  bool is_breakpoint(const Scalar& x) const {
    return std::binary_search(breaks_.begin(), breaks_.end(), x);
  }

  Scalar max_value() const {
    Scalar m(0);
    for (const auto& v : values_)
      if (m < v) m = v;
    return m;
  }

  template <class Other>
  BasicStepFunction<Other> convert() const {
    std::vector<Other> bp;
    std::vector<Other> vals;
    for (const auto& b : breaks_) bp.push_back(convert_scalar<Other>(b));
    for (const auto& v : values_) vals.push_back(convert_scalar<Other>(v));
    return BasicStepFunction<Other>(std::move(bp), std::move(vals));
  }

  friend bool operator==(const BasicStepFunction& a, const BasicStepFunction& b) {
    return a.breaks_ == b.breaks_ && a.values_ == b.values_;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  template <class Other, class From>
  static Other convert_scalar(const From& x) {
    if constexpr (std::is_same_v<From, Rational> && std::is_same_v<Other, double>) {
      return x.get_d();
    } else {
      return Other(x);
    }
  }

  std::vector<Scalar> breaks_;
  std::vector<Scalar> values_;
};

using StepFunction = BasicStepFunction<Rational>;

inline StepFunction make_step(std::vector<Rational> breakpoints, std::vector<Rational> values) {
  return StepFunction(std::move(breakpoints), std::move(values));
}

/// Continuous piecewise-linear antiderivative I with I(x) = 0 left of the
/// support.
template <class Scalar>
class BasicPrefixIntegral {
 public:
  explicit BasicPrefixIntegral(const BasicStepFunction<Scalar>& f)
      : breaks_(f.breakpoints()), values_(f.values()) {
    cumulative_.reserve(breaks_.size());
    if (breaks_.empty()) return;
    cumulative_.push_back(Scalar(0));
    for (std::size_t k = 0; k < values_.size(); ++k)
      cumulative_.push_back(Scalar(cumulative_.back() + values_[k] * (breaks_[k + 1] - breaks_[k])));
  }

  Scalar operator()(const Scalar& x) const {
    if (breaks_.empty() || !(breaks_.front() < x)) return Scalar(0);
    if (!(x < breaks_.back())) return cumulative_.back();
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t k = static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return Scalar(cumulative_[k] + values_[k] * (x - breaks_[k]));
  }

  Scalar total() const { return cumulative_.empty() ? Scalar(0) : cumulative_.back(); }
  const std::vector<Scalar>& cumulative() const { return cumulative_; }

 private:
  std::vector<Scalar> breaks_;
  std::vector<Scalar> values_;
  std::vector<Scalar> cumulative_;
};

using PrefixIntegral = BasicPrefixIntegral<Rational>;

/// Mean of f over [a, b].
template <class Scalar>
Scalar average(const BasicPrefixIntegral<Scalar>& I, const Scalar& a, const Scalar& b) {
  if (!(a < b)) throw std::invalid_argument("average: need a < b");
  return Scalar((I(b) - I(a)) / (b - a));
}

template <class Scalar>
Scalar average(const BasicStepFunction<Scalar>& f, const Scalar& a, const Scalar& b) {
  return average(BasicPrefixIntegral<Scalar>(f), a, b);
}

namespace detail {
inline long double to_ld(const Rational& q) { return to_long_double(q); }
inline long double to_ld(double x) { return x; }
}  // namespace detail

/// Sum of v_i^p |piece_i|; the p-th power of the L^p norm.
template <class Scalar>
long double lp_norm_pow(const BasicStepFunction<Scalar>& f, long double p) {
  if (!(p > 1)) throw std::invalid_argument("lp norm: need p > 1");
  long double sum = 0;
  const auto& bp = f.breakpoints();
  const auto& v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    sum += std::pow(detail::to_ld(v[i]), p) * detail::to_ld(Scalar(bp[i + 1] - bp[i]));
  return sum;
}

template <class Scalar>
long double lp_norm_p(const BasicStepFunction<Scalar>& f, long double p) {
  return std::pow(lp_norm_pow(f, p), 1.0L / p);
}

/// |{f > lambda}|.
template <class Scalar>
Scalar level_measure(const BasicStepFunction<Scalar>& f, const Scalar& lambda) {
  if (lambda < 0) throw std::invalid_argument("level_measure: lambda < 0");
  Scalar total(0);
  const auto& bp = f.breakpoints();
  const auto& v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (lambda < v[i]) total += bp[i + 1] - bp[i];
  return total;
}

/// Integral of f over {f > lambda}.
template <class Scalar>
Scalar integral_over_superlevel(const BasicStepFunction<Scalar>& f, const Scalar& lambda) {
  if (lambda < 0) throw std::invalid_argument("integral_over_superlevel: lambda < 0");
  Scalar total(0);
  const auto& bp = f.breakpoints();
  const auto& v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (lambda < v[i]) total += v[i] * (bp[i + 1] - bp[i]);
  return total;
}

inline StepFunction scale(const StepFunction& f, const Rational& c) {
  if (c < 0) throw std::invalid_argument("scale: negative factor");
  std::vector<Rational> vals;
  for (const auto& v : f.values()) vals.push_back(v * c);
  return StepFunction(f.breakpoints(), std::move(vals));
}

// ---------------------------------------------------------------------------
// stepfn v1 text format:
//   stepfn v1
//   x_0 x_1 ... x_m
//   v_1 ... v_m

inline void write_stepfn(std::ostream& os, const StepFunction& f) {
  os << "stepfn v1\n";
  const auto& bp = f.breakpoints();
  for (std::size_t i = 0; i < bp.size(); ++i) os << (i ? " " : "") << to_string(bp[i]);
  os << '\n';
  const auto& v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << to_string(v[i]);
  os << '\n';
}

inline std::string format_stepfn(const StepFunction& f) {
  std::ostringstream os;
  write_stepfn(os, f);
  return os.str();
}

inline StepFunction read_stepfn(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::invalid_argument("stepfn: missing header");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != "stepfn v1") throw std::invalid_argument("stepfn: bad header '" + header + "'");
  auto read_line = [&is](const char* what) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument(std::string("stepfn: missing ") + what);
    std::istringstream ls(line);
    std::vector<Rational> out;
    std::string tok;
    while (ls >> tok) out.push_back(parse_rational(tok));
    return out;
  };
  auto bp = read_line("breakpoints");
  auto vals = read_line("values");
  if (bp.size() == 1 && vals.empty()) bp.clear();
  return StepFunction(std::move(bp), std::move(vals));
}

inline StepFunction parse_stepfn(const std::string& text) {
  std::istringstream is(text);
  return read_stepfn(is);
}

}  // namespace maxbound
