#pragma once

// Independent reference implementations used only by the tests. Each oracle
// recomputes a quantity the library produces, by a *different* algorithm
// (different reduction, different pivoting, exhaustive enumeration, or a
// closed form), so agreement is meaningful evidence rather than an echo.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "sigmin/matrix.hpp"

namespace oracles {

using sigmin::Matrix;
using sigmin::Vector;

// ---------------------------------------------------------------------------
// Symmetric eigenvalues: Householder tridiagonalization + Sturm bisection.
// The library's singular value path reduces A itself to bidiagonal form and
// bisects the Golub-Kahan tridiagonal; this oracle reduces the Gram matrix
// A^T A to symmetric tridiagonal form instead, an entirely separate route.
// ---------------------------------------------------------------------------

// dense symmetric S -> (diag d, offdiag e), standard Householder similarity
inline void tridiagonalize_symmetric(std::vector<std::vector<double>> S,
                                     std::vector<double>& d,
                                     std::vector<double>& e) {
  const std::size_t n = S.size();
  d.assign(n, 0.0);
  e.assign(n > 1 ? n - 1 : 0, 0.0);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double sigma = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) sigma += S[i][k] * S[i][k];
    if (sigma == 0.0) {
      e[k] = 0.0;
      continue;
    }
    const double x0 = S[k + 1][k];
    const double alpha = x0 >= 0.0 ? -std::sqrt(sigma) : std::sqrt(sigma);
    std::vector<double> v(n, 0.0);
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = S[i][k];
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) {
      e[k] = alpha;
      continue;
    }
    const double beta = 2.0 / vnorm2;
    // w = beta * S v ; tau = beta/2 * v^T w ; S <- S - v w^T - w v^T + ...
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += S[i][j] * v[j];
      w[i] = beta * s;
    }
    double vw = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vw += v[i] * w[i];
    const double half_beta_vw = 0.5 * beta * vw;
    for (std::size_t i = k + 1; i < n; ++i) w[i] -= half_beta_vw * v[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        S[i][j] -= v[i] * w[j] + w[i] * v[j];
    S[k + 1][k] = alpha;
    S[k][k + 1] = alpha;
    e[k] = alpha;
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = S[i][i];
  if (n > 1) e[n - 2] = S[n - 1][n - 2];
}

// number of eigenvalues of tridiagonal (d, e) strictly below x
inline std::size_t tridiag_count_below(const std::vector<double>& d,
                                       const std::vector<double>& e,
                                       double x) {
  constexpr double kPivMin = 1e-300;
  std::size_t count = 0;
  double q = d[0] - x;
  if (std::abs(q) < kPivMin) q = -kPivMin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    q = (d[i] - x) - e[i - 1] * e[i - 1] / q;
    if (std::abs(q) < kPivMin) q = -kPivMin;
    if (q < 0.0) ++count;
  }
  return count;
}

// all eigenvalues of a dense symmetric matrix, ascending
inline std::vector<double> symmetric_eigenvalues(
    const std::vector<std::vector<double>>& S) {
  const std::size_t n = S.size();
  std::vector<double> d, e;
  tridiagonalize_symmetric(S, d, e);
  double r = 0.0;  // Gershgorin radius bound
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(d[i]);
    if (i > 0) row += std::abs(e[i - 1]);
    if (i + 1 < n) row += std::abs(e[i]);
    r = std::max(r, row);
  }
  r = r * (1.0 + 8.0 * std::numeric_limits<double>::epsilon()) + 1e-30;
  std::vector<double> eig(n);
  for (std::size_t i = 1; i <= n; ++i) {
    double lo = -r, hi = r;
    for (int it = 0; it < 120; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (tridiag_count_below(d, e, mid) >= i)
        hi = mid;
      else
        lo = mid;
    }
    eig[i - 1] = 0.5 * (lo + hi);
  }
  return eig;
}

// singular values via eigenvalues of the (smaller-side) Gram matrix,
// descending. Accuracy near zero is ~ sqrt(eps)*sigma_max -- callers pick
// tolerances accordingly.
inline std::vector<double> singular_values_gram(const Matrix& A) {
  const bool tall = A.rows() >= A.cols();
  const std::size_t m = tall ? A.cols() : A.rows();
  std::vector<std::vector<double>> G(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      double s = 0.0;
      if (tall) {
        for (std::size_t k = 0; k < A.rows(); ++k) s += A(k, i) * A(k, j);
      } else {
        for (std::size_t k = 0; k < A.cols(); ++k) s += A(i, k) * A(j, k);
      }
      G[i][j] = s;
      G[j][i] = s;
    }
  std::vector<double> eig = symmetric_eigenvalues(G);
  std::vector<double> sv(m);
  for (std::size_t i = 0; i < m; ++i)
    sv[m - 1 - i] = std::sqrt(std::max(0.0, eig[i]));
  return sv;
}

// ---------------------------------------------------------------------------
// Determinant by Gaussian elimination with FULL pivoting (the library's LU
// uses partial pivoting; a different pivot strategy breaks ties differently).
// ---------------------------------------------------------------------------

inline double det_full_pivot(Matrix M) {
  const std::size_t n = M.rows();
  if (M.cols() != n) throw std::invalid_argument("det: square only");
  double det = 1.0;
  std::vector<std::size_t> col_of(n);
  for (std::size_t j = 0; j < n; ++j) col_of[j] = j;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k, pc = k;
    double best = 0.0;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (std::abs(M(i, col_of[j])) > best) {
          best = std::abs(M(i, col_of[j]));
          pr = i;
          pc = j;
        }
    if (best == 0.0) return 0.0;
    if (pr != k) {
      for (std::size_t j = 0; j < n; ++j) {
        const double t = M(k, j);
        M(k, j) = M(pr, j);
        M(pr, j) = t;
      }
      det = -det;
    }
    if (pc != k) {
      std::swap(col_of[pc], col_of[k]);
      det = -det;
    }
    const double piv = M(k, col_of[k]);
    det *= piv;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = M(i, col_of[k]) / piv;
      for (std::size_t j = k + 1; j < n; ++j)
        M(i, col_of[j]) -= f * M(k, col_of[j]);
    }
  }
  return det;
}

// ---------------------------------------------------------------------------
// Distance to a span via the normal equations (the library orthonormalizes).
// ---------------------------------------------------------------------------

inline double dist_to_span_normal_eq(const Vector& v,
                                     const std::vector<Vector>& basis) {
  const std::size_t k = basis.size();
  double vv = 0.0;
  for (double x : v) vv += x * x;
  if (k == 0) return std::sqrt(vv);
  std::vector<std::vector<double>> G(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < v.size(); ++t) s += basis[i][t] * basis[j][t];
      G[i][j] = s;
    }
    double s = 0.0;
    for (std::size_t t = 0; t < v.size(); ++t) s += basis[i][t] * v[t];
    G[i][k] = s;
  }
  // Gaussian elimination with partial pivoting on the augmented system
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < k; ++i)
      if (std::abs(G[i][c]) > std::abs(G[p][c])) p = i;
    std::swap(G[p], G[c]);
    if (G[c][c] == 0.0) continue;  // dependent basis: skip the column
    for (std::size_t i = 0; i < k; ++i) {
      if (i == c) continue;
      const double f = G[i][c] / G[c][c];
      for (std::size_t j = c; j <= k; ++j) G[i][j] -= f * G[c][j];
    }
  }
  double proj_sq = 0.0;  // g^T w with G w = g
  for (std::size_t i = 0; i < k; ++i) {
    if (G[i][i] == 0.0) continue;
    const double wi = G[i][k] / G[i][i];
    double gi = 0.0;
    for (std::size_t t = 0; t < v.size(); ++t) gi += basis[i][t] * v[t];
    proj_sq += gi * wi;
  }
  return std::sqrt(std::max(0.0, vv - proj_sq));
}

// ---------------------------------------------------------------------------
// Exhaustive sparse distance: minimum over ALL supports of size k of the
// norm of the off-support part.
// ---------------------------------------------------------------------------

inline double dist_to_sparse_exhaustive(const Vector& x, std::size_t k) {
  const std::size_t n = x.size();
  if (k >= n) return 0.0;
  double total = 0.0;
  for (double v : x) total += v * v;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    double kept = 0.0;
    for (std::size_t i : idx) kept += x[i] * x[i];
    best = std::min(best, total - kept);
    // next combination
    std::size_t i = k;
    while (i-- > 0) {
      if (idx[i] + (k - i) < n) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return std::sqrt(std::max(0.0, best));
    }
    if (k == 0) break;
  }
  return std::sqrt(std::max(0.0, best));
}

// ---------------------------------------------------------------------------
// Grid scan oracle for the least-common-denominator search: the first theta
// on a uniform grid where dist(theta a, Z^m) < min(c theta |a|, alpha).
// ---------------------------------------------------------------------------

struct GridScanResult {
  bool found = false;
  double theta = 0.0;
  std::size_t evaluations = 0;
};

inline double grid_gap(double theta, const Vector& a, double norm_a,
                       double alpha, double c) {
  double d2 = 0.0;
  for (double ai : a) {
    const double x = theta * ai;
    const double r = x - std::nearbyint(x);
    d2 += r * r;
  }
  return std::sqrt(d2) - std::min(c * theta * norm_a, alpha);
}

inline GridScanResult lcd_first_feasible_on_grid(const Vector& a, double alpha,
                                                 double c, double lo, double hi,
                                                 double pitch) {
  GridScanResult r;
  double norm_a = 0.0;
  for (double v : a) norm_a += v * v;
  norm_a = std::sqrt(norm_a);
  const long long k0 = std::max(1ll, static_cast<long long>(std::ceil(lo / pitch)));
  const long long k1 = static_cast<long long>(std::floor(hi / pitch));
  for (long long k = k0; k <= k1; ++k) {
    const double theta = static_cast<double>(k) * pitch;
    ++r.evaluations;
    if (grid_gap(theta, a, norm_a, alpha, c) < 0.0) {
      r.found = true;
      r.theta = theta;
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Exact concentration function of S = sum_i u eps_i for the flat direction
// u = 1/sqrt(n) on fair signs: atoms s_k = (n - 2k)/sqrt(n) with weights
// C(n,k)/2^n; the largest open window of length 2*radius, weighted.
// ---------------------------------------------------------------------------

inline double flat_bernoulli_concentration(std::size_t n, double radius) {
  // Pascal triangle in doubles (exact for n <= 60)
  std::vector<std::vector<double>> P(n + 1);
  P[0] = {1.0};
  for (std::size_t row = 1; row <= n; ++row) {
    P[row].assign(row + 1, 0.0);
    P[row][0] = 1.0;
    P[row][row] = 1.0;
    for (std::size_t k = 1; k < row; ++k)
      P[row][k] = P[row - 1][k - 1] + P[row - 1][k];
  }
  const double denom = std::ldexp(1.0, static_cast<int>(n));  // 2^n
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<std::pair<double, double>> atoms(n + 1);  // (position, mass)
  for (std::size_t k = 0; k <= n; ++k)
    atoms[k] = {(static_cast<double>(n) - 2.0 * static_cast<double>(k)) *
                    inv_sqrt_n,
                P[n][k] / denom};
  std::sort(atoms.begin(), atoms.end());
  const double len = 2.0 * radius;
  double best = 0.0;
  std::size_t j = 0;
  double window = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    if (j < i) {
      j = i;
      window = 0.0;
    }
    while (j <= n && atoms[j].first - atoms[i].first < len) {
      window += atoms[j].second;
      ++j;
    }
    best = std::max(best, window);
    window -= atoms[i].second;
  }
  return best;
}

// ---------------------------------------------------------------------------
// chi-square CDF (for sums of squared standard gaussians)
// ---------------------------------------------------------------------------

inline double chi_square_cdf(double x, double k) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(0.5 * k, 0.5 * x);
}

// ---------------------------------------------------------------------------
// FNV-1a 64 reimplementation (cross-checks the config digest)
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64_reference(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;        // offset basis, decimal
  for (unsigned char ch : bytes) {
    h ^= static_cast<std::uint64_t>(ch);
    h *= 1099511628211ull;                          // prime, decimal
  }
  return h;
}

}  // namespace oracles
