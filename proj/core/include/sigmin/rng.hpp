#pragma once

// Deterministic random number generation.
//
// Everything here is counter/stream based so that results are reproducible
// by construction:
//   * every matrix entry (i, j) draws from its own stream derived from
//     (seed, i, j) -- enlarging a matrix never perturbs existing entries;
//   * every Monte Carlo trial t draws from a stream derived from
//     (base_seed, t) -- results are independent of scheduling and thread
//     count, and a run can be reproduced trial by trial.
//
// The generator is splitmix64 (Steele, Lea, Vigna): a 64-bit counter advanced
// by the golden-ratio increment and passed through an avalanching finalizer.
// It is statistically solid for Monte Carlo use and trivially seekable.
//
// Transcendental functions that sit on the sampling path (log, exp, pow) are
// implemented here from elementary operations (+, *, /, sqrt -- all correctly
// rounded under IEEE-754) so that sampled values do not depend on the libm
// the binary happens to link. The algorithms are documented in the README.

#include <cstdint>
#include <cmath>
#include <limits>
#include <vector>

namespace sigmin {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer: bijective avalanching mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derive a child stream key from (key, word). Used to build the
// (seed, i, j) entry streams and (seed, trial) trial streams.
inline std::uint64_t derive(std::uint64_t key, std::uint64_t word) {
  return mix64((key ^ 0x6a09e667f3bcc909ull) + kGolden * (word + 1));
}

inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) {
  return derive(derive(base, 0x74726c75ull), trial);
}

inline std::uint64_t entry_key(std::uint64_t seed, std::uint64_t i,
                               std::uint64_t j) {
  return derive(derive(derive(seed, 0x656e7472ull), i), j);
}

// --- deterministic elementary transcendentals ---------------------------
//
// det_log: write x = m * 2^e with m in [0.5, 1); then
//   log x = e*log2 + 2*atanh(t),  t = (m-1)/(m+1) in (-1/3, 0],
// and atanh(t) = t + t^3/3 + t^5/5 + ... converges geometrically (ratio
// t^2 <= 1/9). All steps use only +,*,/ so the result is identical on any
// IEEE-754 platform.
inline double det_log(double x) {
  // natural log for x > 0; returns -inf for x == 0
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  int e = 0;
  double m = std::frexp(x, &e);  // m in [0.5, 1)
  const double t = (m - 1.0) / (m + 1.0);
  const double t2 = t * t;
  double term = t, sum = 0.0;
  for (int k = 1; k < 40; k += 2) {
    sum += term / k;
    term *= t2;
    if (term < 1e-20 && term > -1e-20) break;
  }
  // log2 to full double precision
  constexpr double kLog2 = 0.6931471805599453094172321214581766;
  return static_cast<double>(e) * kLog2 + 2.0 * sum;
}

// det_exp: range-reduce x = k*log2 + r with |r| <= log2/2, exponentiate the
// remainder by Taylor series, and scale by 2^k via ldexp (exact).
inline double det_exp(double x) {
  if (x < -745.0) return 0.0;
  if (x > 709.0) return std::numeric_limits<double>::infinity();
  constexpr double kLog2 = 0.6931471805599453094172321214581766;
  const double kd = std::floor(x / kLog2 + 0.5);
  const int k = static_cast<int>(kd);
  const double r = x - kd * kLog2;
  double term = 1.0, sum = 1.0;
  for (int i = 1; i < 30; ++i) {
    term *= r / i;
    sum += term;
    if (term < 1e-20 && term > -1e-20) break;
  }
  return std::ldexp(sum, k);
}

// det_pow for x > 0
inline double det_pow(double x, double y) { return det_exp(y * det_log(x)); }

// --- the generator --------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(key) {}

  std::uint64_t u64() {
    std::uint64_t z = (state_ += kGolden);
    return mix64(z);
  }

  // uniform in [0, 1): top 53 bits
  double unit() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1)
  double unit_oo() {
    return (static_cast<double>(u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // uniform in [-1, 1)
  double pm1() { return 2.0 * unit() - 1.0; }

  bool coin() { return (u64() >> 63) != 0; }

  // standard Gaussian via the Marsaglia polar method; uses only sqrt and
  // det_log so the value stream is platform independent. A spare value is
  // cached (the method produces pairs).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = pm1();
      v = pm1();
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * det_log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// uniform point on the unit sphere S^{n-1}: normalized Gaussian vector
inline std::vector<double> unit_sphere(Rng& rng, std::size_t n) {
  std::vector<double> x(n);
  double s = 0.0;
  do {
    s = 0.0;
    for (auto& v : x) {
      v = rng.gaussian();
      s += v * v;
    }
  } while (s == 0.0);
  const double inv = 1.0 / std::sqrt(s);
  for (auto& v : x) v *= inv;
  return x;
}

// uniform point in the unit ball B_2^n: sphere point scaled by U^{1/n}
inline std::vector<double> unit_ball(Rng& rng, std::size_t n) {
  std::vector<double> x = unit_sphere(rng, n);
  const double r = det_pow(rng.unit_oo(), 1.0 / static_cast<double>(n));
  for (auto& v : x) v *= r;
  return x;
}

}  // namespace sigmin
