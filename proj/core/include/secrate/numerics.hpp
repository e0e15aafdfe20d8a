#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <utility>

#include "secrate/channel.hpp"
#include "secrate/errors.hpp"

namespace secrate {

struct McConfig {
  std::size_t samples = 1000000;
  std::uint64_t seed = 1;
};

struct Tolerance {
  double abs_tol = 1e-9;
  int max_iter = 200;
};

// Any single sample beyond this magnitude aborts the estimate: the
// integrand has left the regime where a sample mean says anything.
inline constexpr double kDivergenceGuard = 1e12;

// Largest fraction of total absolute mass one sample may carry before the
// estimate is flagged unstable. Smooth square-integrable integrands sit
// orders of magnitude below this at any realistic sample count; integrands
// with an infinite mean (e.g. 1/min of exponential gains) sit above it.
inline constexpr double kUnstableFraction = 0.02;

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  double max_abs = 0.0;
  double sum_abs = 0.0;

  bool unstable() const {
    return samples >= 100 && sum_abs > 0.0 && max_abs > kUnstableFraction * sum_abs;
  }
};

// Monte Carlo expectation of f over channel states. Deterministic for a
// given (spec, seed, samples); consumers that pass the same McConfig see
// the exact same channel draws, which keeps differences of estimates free
// of independent sampling noise.
template <class F>
McEstimate expect(F&& f, const FadingSpec& spec, const McConfig& mc) {
  if (mc.samples == 0) throw ConfigError("expect: samples must be >= 1");
  Sampler sampler(spec, mc.seed);
  double mean = 0.0;
  double m2 = 0.0;
  double max_abs = 0.0;
  double sum_abs = 0.0;
  for (std::size_t i = 0; i < mc.samples; ++i) {
    ChannelState st = sampler.at(i);
    double v = f(st);
    if (!std::isfinite(v) || std::fabs(v) > kDivergenceGuard) {
      std::ostringstream os;
      os << "expect: integrand diverged at sample " << i << " (h_m=" << st.h_m
         << ", h_e=" << st.h_e << ", value=" << v << ")";
      throw DivergenceError(os.str());
    }
    double a = std::fabs(v);
    if (a > max_abs) max_abs = a;
    sum_abs += a;
    double d = v - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (v - mean);
  }
  McEstimate est;
  est.mean = mean;
  est.samples = mc.samples;
  est.max_abs = max_abs;
  est.sum_abs = sum_abs;
  if (mc.samples > 1) {
    double var = m2 / static_cast<double>(mc.samples - 1);
    est.std_error = std::sqrt(var / static_cast<double>(mc.samples));
  }
  return est;
}

// Bisection root finding on [lo, hi]. Assumes g is monotone (unchecked);
// requires a sign change across the interval. Returns the midpoint of the
// final interval, whose width is at most tol.abs_tol.
template <class G>
double bisect(G&& g, double lo, double hi, const Tolerance& tol) {
  if (!(lo <= hi)) throw ConfigError("bisect: need lo <= hi");
  if (!(tol.abs_tol > 0.0)) throw ConfigError("bisect: abs_tol must be > 0");
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) {
    std::ostringstream os;
    os << "bisect: no sign change on [" << lo << ", " << hi << "] (g(lo)="
       << glo << ", g(hi)=" << ghi << ")";
    throw BracketingError(os.str());
  }
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    if (hi - lo <= tol.abs_tol) return 0.5 * (lo + hi);
    double mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  std::ostringstream os;
  os << "bisect: interval still " << (hi - lo) << " wide after " << tol.max_iter
     << " iterations (abs_tol=" << tol.abs_tol << ")";
  throw ConvergenceError(os.str());
}

// [x]^+, used all over rate expressions.
inline double pos(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace secrate
