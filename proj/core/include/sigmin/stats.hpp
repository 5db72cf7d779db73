#pragma once

// Small statistics helpers shared by the experiment harness and tests:
// Wilson score intervals for Bernoulli proportions, sample moments, the
// empirical concentration function (largest probability mass captured by an
// open interval of a given length), and the standard normal CDF.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace sigmin {

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
  double center = 0.0;  // point estimate successes / trials
};

// Wilson score interval for a binomial proportion at confidence z
// (z = 1.96 for 95%). Well behaved at 0 and small counts, unlike the
// normal-approximation interval.
inline WilsonInterval wilson(std::size_t successes, std::size_t trials,
                             double z = 1.96) {
  WilsonInterval w;
  if (trials == 0) return w;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  w.center = p;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double mid = p + z2 / (2.0 * n);
  const double rad = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  w.lo = std::max(0.0, (mid - rad) / denom);
  // the endpoints are exact at the boundary counts; keep them free of
  // float noise so downstream interval checks see genuine probabilities
  w.hi = successes == trials ? 1.0 : std::min(1.0, (mid + rad) / denom);
  if (successes == 0) w.lo = 0.0;
  return w;
}

inline double mean(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

// Empirical concentration function: the largest fraction of the sample
// contained in an OPEN interval of length 2a (radius a), i.e.
//   max_z #{i : |x_i - z| < a} / #samples.
// Computed exactly by a two-pointer sweep over the sorted sample: for every
// left index i, advance j while x_j - x_i < 2a; the best window determines
// the maximizing center z = (x_i + x_{j-1}) / 2.
struct ConcentrationEstimate {
  double level = 0.0;   // max fraction captured
  double center = 0.0;  // a maximizing interval center z
};

inline ConcentrationEstimate concentration_function(std::vector<double> x,
                                                    double a) {
  ConcentrationEstimate est;
  if (x.empty() || a <= 0.0) return est;
  std::sort(x.begin(), x.end());
  const double len = 2.0 * a;
  std::size_t best = 0, best_i = 0, best_j = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (j < i) j = i;
    while (j < x.size() && x[j] - x[i] < len) ++j;
    if (j - i > best) {
      best = j - i;
      best_i = i;
      best_j = j - 1;
    }
  }
  est.level = static_cast<double>(best) / static_cast<double>(x.size());
  est.center = 0.5 * (x[best_i] + x[best_j]);
  return est;
}

// standard normal CDF
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// P(|N(0,1)| <= x) for x >= 0
inline double half_normal_cdf(double x) { return std::erf(x / std::sqrt(2.0)); }

}  // namespace sigmin
