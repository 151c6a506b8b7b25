#pragma once

// Deterministic random helpers. Only the raw std::mt19937_64 stream is used
// (its output is fixed by the standard); the mappings below are our own so
// results do not depend on the standard library's distributions.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "maxbound/rational.hpp"
#include "maxbound/stepfn.hpp"

namespace maxbound {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal via Box-Muller (one draw per call).
inline double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

/// Generator for the random step-function corpus. Breakpoints are multiples
/// of 1/breakpoint_den and values multiples of 1/value_den, bounded away
/// from zero.
struct RandomStepConfig {
  int min_pieces = 1;
  int max_pieces = 8;
  std::int64_t breakpoint_den = 16;
  std::int64_t origin_min = -16;  // in units of 1/breakpoint_den
  std::int64_t origin_max = 16;
  std::int64_t width_min = 1;
  std::int64_t width_max = 8;
  std::int64_t value_den = 8;
  std::int64_t value_min = 1;  // in units of 1/value_den
  std::int64_t value_max = 32;
};

inline StepFunction random_step(Rng& rng, const RandomStepConfig& cfg) {
  if (cfg.min_pieces < 1 || cfg.max_pieces < cfg.min_pieces)
    throw std::invalid_argument("random_step: bad piece range");
  if (cfg.value_min < 1 || cfg.width_min < 1) throw std::invalid_argument("random_step: bad ranges");
  auto pieces = uniform_int(rng, cfg.min_pieces, cfg.max_pieces);
  std::int64_t pos = uniform_int(rng, cfg.origin_min, cfg.origin_max);
  std::vector<Rational> bp{Rational(pos, cfg.breakpoint_den)};
  std::vector<Rational> vals;
  for (std::int64_t i = 0; i < pieces; ++i) {
    pos += uniform_int(rng, cfg.width_min, cfg.width_max);
    bp.emplace_back(pos, cfg.breakpoint_den);
    vals.emplace_back(uniform_int(rng, cfg.value_min, cfg.value_max), cfg.value_den);
  }
  for (auto& q : bp) q.canonicalize();
  for (auto& q : vals) q.canonicalize();
  return StepFunction(std::move(bp), std::move(vals));
}

inline std::vector<StepFunction> random_corpus(std::uint64_t seed, int count, const RandomStepConfig& cfg) {
  Rng rng(seed);
  std::vector<StepFunction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(random_step(rng, cfg));
  return out;
}

/// Points of the form (2k+1)/2^13 drawn uniformly from (lo, hi). They avoid
/// every node of dyadic grids of width >= 2^-12.
inline std::vector<Rational> sample_points(Rng& rng, const Rational& lo, const Rational& hi, int count) {
  const std::int64_t scale = 1 << 13;
  Rational lo_s = lo * scale;
  Rational hi_s = hi * scale;
  mpz_class k_lo;
  mpz_class k_hi;
  mpz_fdiv_q(k_lo.get_mpz_t(), lo_s.get_num_mpz_t(), lo_s.get_den_mpz_t());
  mpz_fdiv_q(k_hi.get_mpz_t(), hi_s.get_num_mpz_t(), hi_s.get_den_mpz_t());
  // Need lo < (2k+1)/scale < hi.
  std::int64_t a = k_lo.get_si();
  std::int64_t b = k_hi.get_si();
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    std::int64_t odd = uniform_int(rng, a, b);
    odd = 2 * (odd / 2) + 1;
    Rational x(odd, scale);
    x.canonicalize();
    if (lo < x && x < hi) out.push_back(x);
  }
  return out;
}

}  // namespace maxbound
