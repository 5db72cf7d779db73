#include "sigmin/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sigmin::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Householder reduction of an N x n (N >= n) matrix to upper bidiagonal
// form, values only: d[0..n) diagonal, e[0..n-1) superdiagonal. The
// reflector vectors are stored over the annihilated entries of the working
// copy; no U/V accumulation.
void bidiagonalize(Matrix& A, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t N = A.rows(), n = A.cols();
  d.assign(n, 0.0);
  e.assign(n > 1 ? n - 1 : 0, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    // left reflector annihilating A(j+1.., j)
    double sigma = 0.0;
    for (std::size_t i = j; i < N; ++i) sigma += A(i, j) * A(i, j);
    if (sigma > 0.0) {
      const double x0 = A(j, j);
      const double alpha = x0 >= 0.0 ? -std::sqrt(sigma) : std::sqrt(sigma);
      const double v0 = x0 - alpha;
      const double vnorm2 = sigma - x0 * x0 + v0 * v0;
      if (vnorm2 > 0.0) {
        A(j, j) = v0;  // v lives in column j, rows j..N
        const double beta = 2.0 / vnorm2;
        for (std::size_t c = j + 1; c < n; ++c) {
          double s = 0.0;
          for (std::size_t i = j; i < N; ++i) s += A(i, j) * A(i, c);
          s *= beta;
          for (std::size_t i = j; i < N; ++i) A(i, c) -= s * A(i, j);
        }
      }
      d[j] = alpha;
    } else {
      d[j] = 0.0;
    }

    if (j + 1 >= n) continue;
    if (j + 2 == n) {
      e[j] = A(j, j + 1);  // single element, nothing to annihilate
      continue;
    }
    // right reflector annihilating A(j, j+2..)
    sigma = 0.0;
    for (std::size_t c = j + 1; c < n; ++c) sigma += A(j, c) * A(j, c);
    if (sigma > 0.0) {
      const double x0 = A(j, j + 1);
      const double alpha = x0 >= 0.0 ? -std::sqrt(sigma) : std::sqrt(sigma);
      const double v0 = x0 - alpha;
      const double vnorm2 = sigma - x0 * x0 + v0 * v0;
      if (vnorm2 > 0.0) {
        A(j, j + 1) = v0;  // v lives in row j, cols j+1..n
        const double beta = 2.0 / vnorm2;
        for (std::size_t r = j + 1; r < N; ++r) {
          double s = 0.0;
          for (std::size_t c = j + 1; c < n; ++c) s += A(j, c) * A(r, c);
          s *= beta;
          for (std::size_t c = j + 1; c < n; ++c) A(r, c) -= s * A(j, c);
        }
      }
      e[j] = alpha;
    } else {
      e[j] = 0.0;
    }
  }
}

// Number of eigenvalues of the symmetric tridiagonal matrix with zero
// diagonal and off-diagonal sequence b that are < x, by counting negative
// pivots of the LDL^T recurrence (Sturm sequence).
std::size_t sturm_count_less(const std::vector<double>& b, double x) {
  constexpr double kPivMin = 1e-300;
  double q = -x;
  if (std::abs(q) < kPivMin) q = -kPivMin;
  std::size_t count = q < 0.0 ? 1u : 0u;
  for (const double bk : b) {
    q = -x - (bk * bk) / q;
    if (std::abs(q) < kPivMin) q = -kPivMin;
    if (q < 0.0) ++count;
  }
  return count;
}

// i-th smallest singular value (1-based) of the bidiagonal (d, e) via
// bisection on the Golub-Kahan tridiagonal, whose 2m eigenvalues are
// exactly {+-sigma_1, ..., +-sigma_m}: for x > 0,
//   #eigenvalues < x  =  m + #{sigma_j < x}.
double bidiagonal_sigma(const std::vector<double>& d,
                        const std::vector<double>& e, std::size_t i) {
  const std::size_t m = d.size();
  // interleave: d0 e0 d1 e1 ... d_{m-1}
  std::vector<double> b;
  b.reserve(2 * m - 1);
  for (std::size_t k = 0; k < m; ++k) {
    b.push_back(d[k]);
    if (k + 1 < m) b.push_back(e[k]);
  }
  double scale = 0.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  for (double& v : b) v /= scale;
  // Gershgorin bound for the scaled tridiagonal
  double hi = 0.0;
  for (std::size_t k = 0; k + 1 < b.size(); ++k)
    hi = std::max(hi, std::abs(b[k]) + std::abs(b[k + 1]));
  hi = std::max(hi, std::abs(b.front()));
  hi = std::max(hi, std::abs(b.back()));
  hi = hi * (1.0 + 8.0 * kEps) + 1e-30;
  double lo = 0.0;
  const std::size_t target = m + i;  // count_less(x) >= target  <=>  x > sigma_i
  for (int iter = 0; iter < 120; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count_less(b, mid) >= target)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 2.0 * kEps * hi) break;
  }
  return 0.5 * (lo + hi) * scale;
}

// bidiagonal factor of A (transposed first if wide), plus sigma_1 bound
void reduce(const Matrix& A, std::vector<double>& d, std::vector<double>& e) {
  Matrix work = A.rows() >= A.cols() ? A : A.transpose();
  bidiagonalize(work, d, e);
}

double relative_backward_bound(const Matrix& A) {
  const double dim = static_cast<double>(std::max(A.rows(), A.cols()));
  return 10.0 * dim * std::sqrt(dim) * kEps + 1e-15;
}

}  // namespace

SpectrumResult singular_values(const Matrix& A) {
  if (A.rows() == 0 || A.cols() == 0)
    throw std::invalid_argument("singular_values: empty matrix");
  std::vector<double> d, e;
  reduce(A, d, e);
  const std::size_t m = d.size();
  SpectrumResult out;
  out.singular_values.resize(m);
  for (std::size_t i = 1; i <= m; ++i)
    out.singular_values[m - i] = bidiagonal_sigma(d, e, i);  // descending
  out.residual = relative_backward_bound(A);
  return out;
}

double smallest_singular_value(const Matrix& A) {
  if (A.rows() == 0 || A.cols() == 0)
    throw std::invalid_argument("smallest_singular_value: empty matrix");
  std::vector<double> d, e;
  reduce(A, d, e);
  return bidiagonal_sigma(d, e, 1);
}

std::vector<double> jacobi_singular_values(const Matrix& A) {
  const Matrix M = A.rows() >= A.cols() ? A : A.transpose();
  const std::size_t N = M.rows(), n = M.cols();
  std::vector<Vector> cols(n);
  for (std::size_t j = 0; j < n; ++j) cols[j] = M.col(j);
  const double tol = 1e-15;
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = norm_sq(cols[i]);
        const double b = norm_sq(cols[j]);
        const double g = dot(cols[i], cols[j]);
        if (a == 0.0 || b == 0.0) continue;
        if (std::abs(g) <= tol * std::sqrt(a * b)) continue;
        rotated = true;
        const double tau = (b - a) / (2.0 * g);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < N; ++r) {
          const double vi = cols[i][r], vj = cols[j][r];
          cols[i][r] = c * vi - s * vj;
          cols[j][r] = s * vi + c * vj;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) sv[j] = norm(cols[j]);
  std::sort(sv.rbegin(), sv.rend());
  return sv;
}

SubspaceBasis orthonormal_basis(const std::vector<Vector>& vectors) {
  SubspaceBasis basis;
  basis.requested = vectors.size();
  if (vectors.empty()) return basis;
  double max_norm = 0.0;
  for (const auto& v : vectors) max_norm = std::max(max_norm, norm(v));
  const double threshold = 1e-12 * max_norm;
  for (const auto& v : vectors) {
    Vector r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis.q) axpy(-dot(r, q), q, r);
    const double rn = norm(r);
    if (rn > threshold && rn > 0.0) {
      scale(r, 1.0 / rn);
      basis.q.push_back(std::move(r));
    }
  }
  basis.rank = basis.q.size();
  return basis;
}

double dist_to_subspace(const Vector& v, const SubspaceBasis& basis) {
  Vector r = v;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis.q) axpy(-dot(r, q), q, r);
  return norm(r);
}

double dist_to_sparse(const Vector& v, std::size_t k) {
  if (k >= v.size()) return 0.0;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = v[i] * v[i];
  // keep the k largest squares, sum the rest
  std::nth_element(sq.begin(), sq.begin() + k, sq.end(),
                   std::greater<double>());
  double s = 0.0;
  for (std::size_t i = k; i < sq.size(); ++i) s += sq[i];
  return std::sqrt(s);
}

namespace {

// LU with partial pivoting, in place; returns false on numerical singularity
bool lu_factor(Matrix& M, std::vector<std::size_t>& piv) {
  const std::size_t n = M.rows();
  piv.resize(n);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      max_abs = std::max(max_abs, std::abs(M(i, j)));
  const double tiny = std::max(max_abs, 1.0e-300) * static_cast<double>(n) *
                      16.0 * kEps;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(M(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(M(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    piv[k] = p;
    if (best <= tiny) return false;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(M(k, j), M(p, j));
    const double inv = 1.0 / M(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = M(i, k) * inv;
      M(i, k) = f;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) M(i, j) -= f * M(k, j);
    }
  }
  return true;
}

void lu_solve(const Matrix& M, const std::vector<std::size_t>& piv,
              Vector& x) {
  const std::size_t n = M.rows();
  for (std::size_t k = 0; k < n; ++k)
    if (piv[k] != k) std::swap(x[k], x[piv[k]]);
  for (std::size_t i = 1; i < n; ++i) {
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= M(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= M(i, j) * x[j];
    x[i] = s / M(i, i);
  }
}

}  // namespace

std::vector<double> column_to_others_distances(const Matrix& A) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("column_to_others_distances: square only");
  const std::size_t n = A.rows();
  Matrix M = A.transpose();
  std::vector<std::size_t> piv;
  if (!lu_factor(M, piv)) return {};
  std::vector<double> dist(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector x(n, 0.0);
    x[j] = 1.0;
    lu_solve(M, piv, x);  // x = A^{-T} e_j
    const double nx = norm(x);
    if (nx == 0.0) return {};
    dist[j] = 1.0 / nx;
  }
  return dist;
}

ProjectedColumns project_out_columns(const Matrix& A,
                                     const std::vector<std::size_t>& keep_cols) {
  const std::size_t n = A.cols();
  std::vector<bool> keep(n, false);
  for (std::size_t j : keep_cols) {
    if (j >= n)
      throw std::invalid_argument("project_out_columns: column out of range");
    keep[j] = true;
  }
  std::vector<Vector> others;
  for (std::size_t j = 0; j < n; ++j)
    if (!keep[j]) others.push_back(A.col(j));
  const SubspaceBasis basis = orthonormal_basis(others);
  ProjectedColumns out;
  out.complement_full_rank = basis.rank == others.size();
  out.W = Matrix(A.rows(), keep_cols.size());
  for (std::size_t c = 0; c < keep_cols.size(); ++c) {
    Vector w = A.col(keep_cols[c]);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis.q) axpy(-dot(w, q), q, w);
    for (std::size_t i = 0; i < A.rows(); ++i) out.W(i, c) = w[i];
  }
  return out;
}

}  // namespace sigmin::linalg
