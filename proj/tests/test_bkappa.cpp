#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "sigmin/bkappa.hpp"
#include "sigmin/rng.hpp"

using namespace sigmin;
using namespace sigmin::bkappa;

namespace {

Vector random_norms(std::size_t n, std::uint64_t seed, double scale = 10.0) {
  Rng rng(seed);
  Vector y(n);
  for (auto& v : y) v = scale * rng.unit_oo();
  return y;
}

}  // namespace

TEST_SUITE("bkappa") {
  TEST_CASE("kappa = 1 forces alpha = 1 and returns the plain sum exactly") {
    Rng rng(41);
    for (int rep = 0; rep < 1000; ++rep) {
      Vector y(5);
      for (auto& v : y) v = 10.0 * rng.unit();
      const auto r = b_kappa(y, 1.0);
      // bit-exact: same left-to-right accumulation as the solver uses
      const double expect = std::accumulate(y.begin(), y.end(), 0.0);
      CHECK(r.value == expect);
      for (double a : r.minimizer.alpha) CHECK(a == 1.0);
    }
  }

  TEST_CASE("monotone nonincreasing in kappa, never above the plain sum") {
    const Vector y = random_norms(8, 42);
    const double total = std::accumulate(y.begin(), y.end(), 0.0);
    double prev = total;
    for (double kappa : {1.0, 1.2, 1.5, 2.0, 4.0, 16.0, 1e4}) {
      const auto r = b_kappa(y, kappa);
      CHECK(r.value <= prev + 1e-12 * total);
      CHECK(r.value >= 0.0);
      CHECK(r.minimizer.is_feasible());
      prev = r.value;
    }
  }

  TEST_CASE("solver output satisfies the optimality conditions") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const std::size_t n = 2 + seed % 9;
      const Vector y = random_norms(n, 100 + seed);
      for (double kappa : {1.5, 2.0, 10.0}) {
        const auto r = b_kappa(y, kappa);
        CHECK(r.minimizer.is_feasible());
        CHECK(kkt_residual(y, r) <= 1e-8);
        // value recomputes from the minimizer
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          v += r.minimizer.alpha[i] * r.minimizer.alpha[i] * y[i];
        CHECK(r.value == doctest::Approx(v).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("agrees with the exhaustive grid search within the grid gap") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      const std::size_t n = 2 + seed % 3;
      const Vector y = random_norms(n, 500 + seed);
      for (double kappa : {1.5, 2.0, 10.0}) {
        const std::size_t steps = n <= 3 ? 200 : 80;
        const auto exact = b_kappa(y, kappa);
        const auto grid = b_kappa_bruteforce(y, kappa, steps);
        const double gap = bruteforce_gap(y, steps);
        // grid minimum can only sit above the exact one, within the gap
        CHECK(grid.value >= exact.value - 1e-9 * (1.0 + exact.value));
        CHECK(grid.value <= exact.value + gap);
        AlphaVector gv{grid.alpha, kappa};
        CHECK(gv.is_feasible(1e-6));
      }
    }
  }

  TEST_CASE("zero coordinates drop out") {
    const Vector y = {0.0, 4.0, 0.0, 9.0};
    const auto r = b_kappa(y, 2.0);
    CHECK(r.minimizer.alpha[0] == 1.0);
    CHECK(r.minimizer.alpha[2] == 1.0);
    const auto dense = b_kappa(Vector{4.0, 9.0}, 4.0);
    // with two free slots the remaining coordinates share the same budget:
    // prod alpha >= 2^-4 = 4^-2
    CHECK(r.value == doctest::Approx(dense.value).epsilon(1e-9));
  }

  TEST_CASE("equal norms have the closed form") {
    // all y_i equal: alpha_i = kappa^-1 once kappa^-1 <= 1, value
    // n y kappa^-2 (uncapped regime)
    const std::size_t n = 6;
    const Vector y(n, 3.0);
    const double kappa = 2.0;
    const auto r = b_kappa(y, kappa);
    CHECK(r.value == doctest::Approx(n * 3.0 / (kappa * kappa)).epsilon(1e-10));
    for (double a : r.minimizer.alpha)
      CHECK(a == doctest::Approx(0.5).epsilon(1e-10));
  }

  TEST_CASE("matrix convenience wrapper uses squared column norms") {
    Matrix A(3, 2);
    A(0, 0) = 3.0;
    A(1, 1) = 4.0;
    const auto via_matrix = b_kappa_matrix(A, 2.0);
    const auto direct = b_kappa(Vector{9.0, 16.0}, 2.0);
    CHECK(via_matrix.value == doctest::Approx(direct.value).epsilon(1e-14));
  }

  TEST_CASE("deviation certificate: objective cap and probability bound") {
    Rng rng(77);
    const std::size_t n = 10;
    const double s = 2.0;
    Vector m(n, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
      Vector y(n);
      for (auto& v : y) v = 5.0 * rng.unit_oo();
      const auto cert = certificate_alpha(y, m, s, 2.0);
      double obj = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        obj += cert.alpha[i] * cert.alpha[i] * y[i];
      double msum = 0.0;
      for (double v : m) msum += v;
      CHECK(obj <= s * msum * (1.0 + 1e-12));
      for (double a : cert.alpha) {
        CHECK(a <= 1.0);
        CHECK(a >= 0.0);
      }
    }
    // frozen value of the analytic tail bound at the reference parameters:
    // kappa = 2, n = 10, p = 1, s = 2 -> 2^-20 * 1.5^10
    const double bound = deviation_probability_bound(2.0, 10, 1.0, 2.0);
    const double frozen = std::pow(2.0, -20.0) * std::pow(1.5, 10.0);
    CHECK(bound == doctest::Approx(frozen).epsilon(1e-12));
    CHECK(bound == doctest::Approx(5.4993666708e-5).epsilon(1e-6));
    // monotonicity sanity: larger s or kappa shrink the bound
    CHECK(deviation_probability_bound(2.0, 10, 1.0, 4.0) < bound);
    CHECK(deviation_probability_bound(4.0, 10, 1.0, 2.0) < bound);
  }

  TEST_CASE("bisection handles extreme scales") {
    const Vector y = {1e-12, 1.0, 1e12};
    for (double kappa : {1.5, 8.0}) {
      const auto r = b_kappa(y, kappa);
      CHECK(r.minimizer.is_feasible());
      CHECK(kkt_residual(y, r) <= 1e-7);
    }
  }
}
