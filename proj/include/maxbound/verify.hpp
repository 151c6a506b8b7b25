#pragma once

// One-sided verification of the pointwise, level-set and L^p lower bounds
// for iterates of the centered maximal operator.
//
// Certified envelopes only bound M^n f from below, and every inequality
// checked here has M^n f on the large side. A check passing against an
// envelope is therefore a certificate; a check failing against an envelope
// proves nothing and is reported as Inconclusive. Violation is reserved for
// failures witnessed by the exact order-1 evaluator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "maxbound/bounds.hpp"
#include "maxbound/gfun.hpp"
#include "maxbound/maximal.hpp"
#include "maxbound/random.hpp"
#include "maxbound/stepfn.hpp"

namespace maxbound {

inline constexpr long double kVerifySlack = 1e-9L;

enum class VerifyStatus { CertifiedPass, Inconclusive, Violation };

inline std::string_view to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::CertifiedPass: return "certified-pass";
    case VerifyStatus::Inconclusive: return "inconclusive";
    case VerifyStatus::Violation: return "violation";
  }
  return "?";
}

struct Witness {
  std::string location;  // e.g. "x=17/8192" or "lambda=3/2"
  long double lhs = 0;
  long double rhs = 0;
};

struct VerifyOutcome {
  VerifyStatus status = VerifyStatus::CertifiedPass;
  /// Smallest lhs - rhs observed.
  long double margin = std::numeric_limits<long double>::infinity();
  std::optional<Witness> witness;
  /// Width of the uniform grid region; absent for purely exact checks.
  std::optional<Rational> grid_width;
  int refinement_depth = 0;
  std::size_t comparisons = 0;

  bool passed() const { return status == VerifyStatus::CertifiedPass; }
};

namespace detail {

/// Records one comparison. Failures against exact values are violations,
/// failures against certified lower bounds are inconclusive.
inline void record(VerifyOutcome& out, long double lhs, long double rhs, bool exact, const std::string& where) {
  ++out.comparisons;
  long double m = lhs - rhs;
  bool first_or_worse = m < out.margin;
  if (first_or_worse) out.margin = m;
  if (m >= -kVerifySlack) return;
  VerifyStatus failed = exact ? VerifyStatus::Violation : VerifyStatus::Inconclusive;
  if (out.status == VerifyStatus::Violation) return;
  if (failed == VerifyStatus::Violation || out.status == VerifyStatus::CertifiedPass || first_or_worse) {
    out.status = failed;
    out.witness = Witness{where, lhs, rhs};
  }
}

inline std::string at(std::string_view name, const Rational& q) {
  return std::string(name) + "=" + to_string(q);
}

inline const CertifiedLowerStep& order_of(std::span<const CertifiedLowerStep> chain, int n) {
  if (n < 1 || static_cast<std::size_t>(n) > chain.size())
    throw std::invalid_argument("verify: certificate chain too short for requested order");
  return chain[static_cast<std::size_t>(n - 1)];
}

inline Rational width_of(const Grid& grid) {
  Rational w = grid[1] - grid[0];
  for (std::size_t i = 2; i < grid.size(); ++i)
    if (grid[i] - grid[i - 1] < w) w = grid[i] - grid[i - 1];
  return w;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// M^n f >= gamma_n M_L f

/// `chain` must hold certificates of orders 1..n (ignored for n == 1, where
/// both sides are evaluated exactly).
inline VerifyOutcome verify_lemma5(const StepFunction& f, int n, std::span<const Rational> points,
                                   std::span<const CertifiedLowerStep> chain) {
  if (n < 1) throw std::invalid_argument("verify_lemma5: n must be >= 1");
  VerifyOutcome out;
  MaximalEvaluator<Rational> eval(f);
  if (n == 1) {
    for (const auto& x : points) {
      Rational lhs = eval.centered(x);
      Rational rhs = eval.left(x) / 2;
      detail::record(out, to_long_double(lhs), to_long_double(rhs), true, detail::at("x", x));
    }
    return out;
  }
  const auto& cert = detail::order_of(chain, n);
  out.grid_width = detail::width_of(cert.grid);
  const long double g = gamma(n);
  for (const auto& x : points) {
    long double lhs = to_long_double(cert.lower_bound_at(x));
    long double rhs = g * to_long_double(eval.left(x));
    detail::record(out, lhs, rhs, false, detail::at("x", x));
  }
  return out;
}

inline VerifyOutcome verify_lemma5(const StepFunction& f, int n, std::span<const Rational> points,
                                   const Grid& grid) {
  if (n < 1) throw std::invalid_argument("verify_lemma5: n must be >= 1");
  if (n == 1) return verify_lemma5(f, n, points, std::span<const CertifiedLowerStep>{});
  auto chain = certified_chain(f, n, grid);
  return verify_lemma5(f, n, points, chain);
}

// ---------------------------------------------------------------------------
// M^n f(y) >= F(x,h) g_n((y-x)/h) for y >= x, F(x,h) the mean of f on [x-h, x]

inline VerifyOutcome verify_growth(const StepFunction& f, const Rational& x, const Rational& h, int n,
                                   std::span<const Rational> ys, std::span<const CertifiedLowerStep> chain) {
  if (n < 1) throw std::invalid_argument("verify_growth: n must be >= 1");
  if (!(h > 0)) throw std::invalid_argument("verify_growth: h must be positive");
  for (const auto& y : ys)
    if (y < x) throw std::invalid_argument("verify_growth: every y must be >= x");
  VerifyOutcome out;
  const long double mean = to_long_double(average(f, Rational(x - h), x));
  if (n == 1) {
    MaximalEvaluator<Rational> eval(f);
    for (const auto& y : ys) {
      long double t = to_long_double(Rational((y - x) / h));
      detail::record(out, to_long_double(eval.centered(y)), mean * g_closed(1, t), true, detail::at("y", y));
    }
    return out;
  }
  const auto& cert = detail::order_of(chain, n);
  out.grid_width = detail::width_of(cert.grid);
  for (const auto& y : ys) {
    long double t = to_long_double(Rational((y - x) / h));
    detail::record(out, to_long_double(cert.lower_bound_at(y)), mean * g_closed(n, t), false, detail::at("y", y));
  }
  return out;
}

inline VerifyOutcome verify_growth(const StepFunction& f, const Rational& x, const Rational& h, int n,
                                   std::span<const Rational> ys, const Grid& grid) {
  if (n < 1) throw std::invalid_argument("verify_growth: n must be >= 1");
  if (n == 1) return verify_growth(f, x, h, n, ys, std::span<const CertifiedLowerStep>{});
  auto chain = certified_chain(f, n, grid);
  return verify_growth(f, x, h, n, ys, chain);
}

// ---------------------------------------------------------------------------
// |{M^n f > lambda}| >= (gamma_n / lambda) int_{f > lambda} f

inline VerifyOutcome verify_lemma7(const StepFunction& f, int n, const Rational& lambda,
                                   std::span<const CertifiedLowerStep> chain) {
  if (n < 1) throw std::invalid_argument("verify_lemma7: n must be >= 1");
  if (!(lambda > 0)) throw std::invalid_argument("verify_lemma7: lambda must be positive");
  const auto& cert = detail::order_of(chain, n);
  VerifyOutcome out;
  out.grid_width = detail::width_of(cert.grid);
  long double lhs = to_long_double(level_measure(cert.envelope, lambda));
  long double rhs = gamma(n) / to_long_double(lambda) * to_long_double(integral_over_superlevel(f, lambda));
  detail::record(out, lhs, rhs, false, detail::at("lambda", lambda));
  return out;
}

inline VerifyOutcome verify_lemma7(const StepFunction& f, int n, const Rational& lambda, const Grid& grid) {
  if (!(lambda > 0)) throw std::invalid_argument("verify_lemma7: lambda must be positive");
  auto chain = certified_chain(f, n, grid);
  return verify_lemma7(f, n, lambda, chain);
}

// ---------------------------------------------------------------------------
// ||M^n f||_p >= (gamma_n p/(p-1))^{1/p} ||f||_p

inline void require_nonzero(const StepFunction& f) {
  if (f.is_zero()) throw std::invalid_argument("verify: the zero function has ||f||_p = 0");
}

inline VerifyOutcome verify_thm2(const StepFunction& f, long double p, int n,
                                 std::span<const CertifiedLowerStep> chain) {
  require_nonzero(f);
  const long double constant = iterated_constant(p, n);
  const auto& cert = detail::order_of(chain, n);
  VerifyOutcome out;
  out.grid_width = detail::width_of(cert.grid);
  std::ostringstream where;
  where << "p=" << static_cast<double>(p);
  detail::record(out, certified_lp_norm_p(cert, p), constant * lp_norm_p(f, p), false, where.str());
  return out;
}

inline VerifyOutcome verify_thm2(const StepFunction& f, long double p, int n, const Grid& grid) {
  require_nonzero(f);
  if (n < 1) throw std::invalid_argument("verify_thm2: n must be >= 1");
  auto chain = certified_chain(f, n, grid);
  return verify_thm2(f, p, n, chain);
}

// ---------------------------------------------------------------------------
// ||Mf||_p >= (1 + eps_p) ||f||_p

struct MainCheckConfig {
  long double c1 = 2;
  int n_max = 500;
  /// Also require the (p/(2(p-1)))^{1/p} bound when 1 < p < 2.
  bool include_iz_floor = false;
};

/// The floor on ||Mf||_p / ||f||_p that verify_main tests against.
inline long double main_floor(long double p, const MainCheckConfig& cfg) {
  auto best = best_n(p, ap_upper(p, cfg.c1), cfg.n_max);
  long double floor = 1 + (best ? best->epsilon : 0.0L);
  if (cfg.include_iz_floor && p < 2) floor = std::max(floor, iz_constant(p));
  return floor;
}

inline VerifyOutcome verify_main(const StepFunction& f, long double p, const MainCheckConfig& cfg,
                                 std::span<const CertifiedLowerStep> chain) {
  require_nonzero(f);
  const long double floor = main_floor(p, cfg);
  const auto& cert = detail::order_of(chain, 1);
  VerifyOutcome out;
  out.grid_width = detail::width_of(cert.grid);
  std::ostringstream where;
  where << "p=" << static_cast<double>(p);
  detail::record(out, certified_lp_norm_p(cert, p), floor * lp_norm_p(f, p), false, where.str());
  return out;
}

inline VerifyOutcome verify_main(const StepFunction& f, long double p, const MainCheckConfig& cfg,
                                 const Grid& grid) {
  require_nonzero(f);
  auto chain = certified_chain(f, 1, grid);
  return verify_main(f, p, cfg, chain);
}

// ---------------------------------------------------------------------------
// Refinement

/// Certificate chains for one function at successive refinement depths,
/// extended on demand.
class ChainCache {
 public:
  ChainCache(StepFunction f, GridSpec spec, unsigned threads = 1)
      : f_(std::move(f)), spec_(std::move(spec)), threads_(threads) {}

  const StepFunction& function() const { return f_; }

  GridSpec spec_at(int depth) const {
    GridSpec s = spec_;
    for (int i = 0; i < depth; ++i) s = s.refined();
    return s;
  }

  std::span<const CertifiedLowerStep> chain(int depth, int order) {
    if (depth < 0 || order < 1) throw std::invalid_argument("ChainCache: bad depth or order");
    auto& entry = chains_[depth];
    if (static_cast<int>(entry.size()) < order) {
      Grid grid = entry.empty() ? make_grid(f_, spec_at(depth)) : entry.front().grid;
      StepFunction current = entry.empty() ? f_ : entry.back().envelope;
      for (int k = static_cast<int>(entry.size()) + 1; k <= order; ++k) {
        CertifiedLowerStep step = certified_lower(current, grid, threads_);
        step.order = k;
        step.base = f_;
        current = step.envelope;
        entry.push_back(std::move(step));
      }
    }
    return {entry.data(), static_cast<std::size_t>(order)};
  }

 private:
  StepFunction f_;
  GridSpec spec_;
  unsigned threads_;
  std::map<int, std::vector<CertifiedLowerStep>> chains_;
};

struct RefinedOutcome {
  VerifyOutcome first;  // at depth 0
  VerifyOutcome final;  // after refinement (equals first when it passed)
};

/// Runs `check(chain_at_depth)` and retries Inconclusive outcomes on refined
/// grids up to `max_depth` times. Violations stop immediately.
inline RefinedOutcome with_refinement(ChainCache& cache, int order, int max_depth,
                                      const std::function<VerifyOutcome(std::span<const CertifiedLowerStep>)>& check) {
  RefinedOutcome r;
  r.first = check(cache.chain(0, order));
  r.final = r.first;
  for (int depth = 1; depth <= max_depth && r.final.status == VerifyStatus::Inconclusive; ++depth) {
    r.final = check(cache.chain(depth, order));
    r.final.refinement_depth = depth;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Suites over a seeded corpus

enum class Suite { Lemma5, Growth, Lemma7, Thm2, Main };

inline std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::Lemma5: return "lemma5";
    case Suite::Growth: return "growth";
    case Suite::Lemma7: return "lemma7";
    case Suite::Thm2: return "thm2";
    case Suite::Main: return "main";
  }
  return "?";
}

inline Suite parse_suite(std::string_view name) {
  for (Suite s : {Suite::Lemma5, Suite::Growth, Suite::Lemma7, Suite::Thm2, Suite::Main})
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown suite: " + std::string(name));
}

struct SuiteConfig {
  std::uint64_t seed = 42;
  int functions = 500;
  int points = 20;
  GridSpec grid;
  int max_refinements = 3;
  std::vector<int> lemma5_orders{1, 2, 3};
  std::vector<int> growth_orders{1, 2};
  std::vector<int> lemma7_orders{1, 2};
  std::vector<int> thm2_orders{1, 2};
  std::vector<long double> ps{1.25L, 1.5L, 2.0L, 3.0L};
  MainCheckConfig main;
  RandomStepConfig generator;
  bool include_indicator = true;
  unsigned threads = 1;
};

struct CheckRecord {
  std::string function_label;  // "indicator" or "random#<i>"
  std::size_t function_index = 0;
  Suite suite = Suite::Lemma5;
  int n = 0;
  std::string parameter;
  RefinedOutcome outcome;
};

struct SuiteSummary {
  std::size_t checks = 0;
  std::size_t pass_first = 0;
  std::size_t pass_final = 0;
  std::size_t inconclusive_final = 0;
  std::size_t violations = 0;
  int max_depth_used = 0;
  long double min_margin = std::numeric_limits<long double>::infinity();
};

struct SuiteResult {
  std::vector<StepFunction> corpus;  // corpus[0] is the indicator when included
  std::vector<std::string> labels;
  std::vector<CheckRecord> records;

  SuiteSummary summary(std::optional<Suite> only = std::nullopt) const {
    SuiteSummary s;
    for (const auto& r : records) {
      if (only && r.suite != *only) continue;
      ++s.checks;
      if (r.outcome.first.passed()) ++s.pass_first;
      if (r.outcome.final.passed()) ++s.pass_final;
      if (r.outcome.final.status == VerifyStatus::Inconclusive) ++s.inconclusive_final;
      if (r.outcome.final.status == VerifyStatus::Violation) ++s.violations;
      s.max_depth_used = std::max(s.max_depth_used, r.outcome.final.refinement_depth);
      s.min_margin = std::min(s.min_margin, r.outcome.first.margin);
    }
    return s;
  }
};

inline StepFunction indicator_unit() { return make_step({Rational(0), Rational(1)}, {Rational(1)}); }

/// Threshold levels for level-set checks: value quantiles (0, 1/4, 1/2, 3/4,
/// 1 of the sorted value multiset) and midpoints between consecutive ones.
inline std::vector<Rational> lambda_levels(const StepFunction& f) {
  std::vector<Rational> v = f.values();
  std::sort(v.begin(), v.end());
  std::vector<Rational> q;
  for (int i = 0; i <= 4; ++i) q.push_back(v[(v.size() - 1) * static_cast<std::size_t>(i) / 4]);
  q.erase(std::unique(q.begin(), q.end()), q.end());
  std::vector<Rational> out;
  for (std::size_t i = 0; i < q.size(); ++i) {
    out.push_back(q[i]);
    if (i + 1 < q.size()) out.push_back((q[i] + q[i + 1]) / 2);
  }
  return out;
}

namespace detail {

/// Order-1 pointwise checks are exact and need no grid.
template <class Check>
RefinedOutcome exact_or_refined(ChainCache& cache, int n, int max_depth, const Check& check) {
  if (n == 1) {
    VerifyOutcome o = check(std::span<const CertifiedLowerStep>{});
    return {o, o};
  }
  return with_refinement(cache, n, max_depth, check);
}

inline void run_function(Suite suite, const SuiteConfig& cfg, std::size_t index, const std::string& label,
                         ChainCache& cache, Rng& rng, std::vector<CheckRecord>& out) {
  const StepFunction& f = cache.function();
  const bool is_indicator = label == "indicator";
  Rational width = f.support_hi() - f.support_lo();
  Rational margin = cfg.grid.margin.value_or(width);
  auto add = [&](int n, std::string parameter, RefinedOutcome o) {
    out.push_back(CheckRecord{label, index, suite, n, std::move(parameter), std::move(o)});
  };

  switch (suite) {
    case Suite::Lemma5: {
      std::vector<Rational> pts = sample_points(rng, f.support_lo() - margin, f.support_hi() + margin, cfg.points);
      if (is_indicator) {
        pts.push_back(Rational(2));
        pts.push_back(Rational(1, 2));
      }
      for (int n : cfg.lemma5_orders) {
        auto check = [&](std::span<const CertifiedLowerStep> chain) { return verify_lemma5(f, n, pts, chain); };
        add(n, std::to_string(pts.size()) + " points", exact_or_refined(cache, n, cfg.max_refinements, check));
      }
      break;
    }
    case Suite::Growth: {
      // Windows [x - h, x] ending at the right edge of the support, and at a
      // random interior point; y from x to the end of the uniform region.
      std::vector<std::pair<Rational, Rational>> windows{{f.support_hi(), width}};
      auto interior = sample_points(rng, f.support_lo(), f.support_hi(), 1);
      windows.emplace_back(interior.front(), interior.front() - f.support_lo());
      for (const auto& [x, h] : windows) {
        std::vector<Rational> ys{x};
        auto more = sample_points(rng, x, f.support_hi() + margin, cfg.points);
        ys.insert(ys.end(), more.begin(), more.end());
        for (int n : cfg.growth_orders) {
          auto check = [&](std::span<const CertifiedLowerStep> chain) {
            return verify_growth(f, x, h, n, ys, chain);
          };
          add(n, "x=" + to_string(x) + " h=" + to_string(h), exact_or_refined(cache, n, cfg.max_refinements, check));
        }
      }
      break;
    }
    case Suite::Lemma7: {
      std::vector<Rational> lambdas = lambda_levels(f);
      if (is_indicator) {
        lambdas.push_back(Rational(1, 4));
        lambdas.push_back(Rational(2));
      }
      for (int n : cfg.lemma7_orders)
        for (const auto& lambda : lambdas) {
          auto check = [&](std::span<const CertifiedLowerStep> chain) { return verify_lemma7(f, n, lambda, chain); };
          add(n, "lambda=" + to_string(lambda), with_refinement(cache, n, cfg.max_refinements, check));
        }
      break;
    }
    case Suite::Thm2: {
      for (long double p : cfg.ps)
        for (int n : cfg.thm2_orders) {
          auto check = [&](std::span<const CertifiedLowerStep> chain) { return verify_thm2(f, p, n, chain); };
          std::ostringstream param;
          param << "p=" << static_cast<double>(p);
          add(n, param.str(), with_refinement(cache, n, cfg.max_refinements, check));
        }
      break;
    }
    case Suite::Main: {
      for (long double p : cfg.ps) {
        auto check = [&](std::span<const CertifiedLowerStep> chain) { return verify_main(f, p, cfg.main, chain); };
        std::ostringstream param;
        param << "p=" << static_cast<double>(p);
        add(1, param.str(), with_refinement(cache, 1, cfg.max_refinements, check));
      }
      break;
    }
  }
}

}  // namespace detail

/// Runs the given suites over an explicit corpus. Each function gets its own
/// RNG stream derived from the seed and its index, so results do not depend
/// on scheduling or on which other suites run.
inline SuiteResult run_suites_on(std::vector<StepFunction> corpus, std::vector<std::string> labels,
                                 std::span<const Suite> suites, const SuiteConfig& cfg) {
  if (corpus.size() != labels.size()) throw std::invalid_argument("run_suites: label count mismatch");
  if (cfg.points < 1) throw std::invalid_argument("run_suites: need at least one sample point");
  for (const auto& f : corpus) require_nonzero(f);
  SuiteResult result;
  result.corpus = std::move(corpus);
  result.labels = std::move(labels);
  std::vector<std::vector<CheckRecord>> per_function(result.corpus.size());
  parallel_for(
      result.corpus.size(),
      [&](std::size_t i) {
        ChainCache cache(result.corpus[i], cfg.grid);
        for (Suite s : suites) {
          Rng rng(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)) ^ (static_cast<std::uint64_t>(s) << 56));
          detail::run_function(s, cfg, i, result.labels[i], cache, rng, per_function[i]);
        }
      },
      cfg.threads);
  for (auto& v : per_function)
    for (auto& r : v) result.records.push_back(std::move(r));
  return result;
}

/// The indicator of [0,1] (optional) followed by the seeded random corpus.
inline SuiteResult run_suites(std::span<const Suite> suites, const SuiteConfig& cfg) {
  if (cfg.functions < 0) throw std::invalid_argument("run_suites: bad corpus size");
  std::vector<StepFunction> corpus;
  std::vector<std::string> labels;
  if (cfg.include_indicator) {
    corpus.push_back(indicator_unit());
    labels.push_back("indicator");
  }
  auto random = random_corpus(cfg.seed, cfg.functions, cfg.generator);
  for (std::size_t i = 0; i < random.size(); ++i) {
    corpus.push_back(std::move(random[i]));
    labels.push_back("random#" + std::to_string(i));
  }
  return run_suites_on(std::move(corpus), std::move(labels), suites, cfg);
}

}  // namespace maxbound
