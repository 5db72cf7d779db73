#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sigmin/ensembles.hpp"
#include "sigmin/linalg.hpp"
#include "sigmin/matrix.hpp"
#include "sigmin/rng.hpp"

using namespace sigmin;
using ensembles::EnsembleSpec;
using ensembles::EntryLaw;

namespace {

Matrix random_matrix(std::size_t N, std::size_t n, std::uint64_t seed,
                     bool gaussian = true) {
  Rng rng(seed);
  Matrix A(N, n);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < n; ++j)
      A(i, j) = gaussian ? rng.gaussian() : (rng.coin() ? 1.0 : -1.0);
  return A;
}

double sigma_max_of(const std::vector<double>& sv) {
  return sv.empty() ? 0.0 : sv.front();
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("matrix primitives") {
    Matrix A(2, 3);
    A(0, 0) = 1;
    A(0, 1) = 2;
    A(0, 2) = 3;
    A(1, 0) = 4;
    A(1, 1) = 5;
    A(1, 2) = 6;
    CHECK(A.col_norm_sq(1) == doctest::Approx(4 + 25));
    CHECK(A.hs_norm_sq() == doctest::Approx(91));
    const Matrix T = A.transpose();
    CHECK(T.rows() == 3);
    CHECK(T(2, 1) == 6);
    const Vector y = A.apply({1, 1, 1});
    CHECK(y[0] == doctest::Approx(6));
    CHECK(y[1] == doctest::Approx(15));
    const Vector z = A.apply_transposed({1, 1});
    CHECK(z[2] == doctest::Approx(9));
    const Matrix G = A.gram();
    CHECK(G(0, 1) == doctest::Approx(2 + 20));
    CHECK(G(1, 0) == G(0, 1));
    const Matrix P = A.mul(T);
    CHECK(P(0, 0) == doctest::Approx(14));
  }

  TEST_CASE("singular values of closed-form matrices") {
    // identity
    const auto id = linalg::singular_values(Matrix::identity(5));
    for (double s : id.singular_values) CHECK(s == doctest::Approx(1.0));
    CHECK(linalg::smallest_singular_value(Matrix::identity(5)) ==
          doctest::Approx(1.0));

    // diagonal
    Matrix D(3, 3);
    D(0, 0) = 3.0;
    D(1, 1) = -2.0;
    D(2, 2) = 0.5;
    const auto dv = linalg::singular_values(D).singular_values;
    CHECK(dv[0] == doctest::Approx(3.0));
    CHECK(dv[1] == doctest::Approx(2.0));
    CHECK(dv[2] == doctest::Approx(0.5));

    // rotation: all singular values 1
    Matrix R(2, 2);
    const double th = 0.7;
    R(0, 0) = std::cos(th);
    R(0, 1) = -std::sin(th);
    R(1, 0) = std::sin(th);
    R(1, 1) = std::cos(th);
    const auto rv = linalg::singular_values(R).singular_values;
    CHECK(rv[0] == doctest::Approx(1.0));
    CHECK(rv[1] == doctest::Approx(1.0));

    // rank one: u v^T has sigma = |u||v|, rest zero
    Matrix K(4, 3);
    const Vector u = {1, 2, -1, 0.5}, v = {2, 0, 1};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) K(i, j) = u[i] * v[j];
    const auto kv = linalg::singular_values(K).singular_values;
    CHECK(kv[0] == doctest::Approx(norm(u) * norm(v)));
    CHECK(kv[1] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(kv[2] == doctest::Approx(0.0).epsilon(1e-10));
  }

  TEST_CASE("singular values agree with the Gram-eigenvalue oracle") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      const std::size_t N = 3 + seed % 6;          // 3..8
      const std::size_t n = 3 + (seed * 7) % 6;    // 3..8, tall/wide mixed
      const Matrix A = random_matrix(N, n, seed);
      const auto lib = linalg::singular_values(A).singular_values;
      const auto ref = oracles::singular_values_gram(A);
      REQUIRE(lib.size() == ref.size());
      const double scale = std::max(1.0, sigma_max_of(ref));
      for (std::size_t i = 0; i < lib.size(); ++i)
        CHECK(std::abs(lib[i] - ref[i]) <= 1e-7 * scale);
      CHECK(linalg::smallest_singular_value(A) ==
            doctest::Approx(lib.back()).epsilon(1e-10));
    }
  }

  TEST_CASE("two internal SVD paths agree") {
    for (std::uint64_t seed = 40; seed < 48; ++seed) {
      const Matrix A = random_matrix(7, 5, seed, seed % 2 == 0);
      const auto bisect = linalg::singular_values(A).singular_values;
      const auto jac = linalg::jacobi_singular_values(A);
      REQUIRE(bisect.size() == jac.size());
      const double scale = std::max(1.0, sigma_max_of(bisect));
      for (std::size_t i = 0; i < jac.size(); ++i)
        CHECK(std::abs(bisect[i] - jac[i]) <= 1e-9 * scale);
    }
  }

  TEST_CASE("sum of squared singular values is the squared HS norm") {
    for (std::uint64_t seed = 60; seed < 66; ++seed) {
      const Matrix A = random_matrix(6, 6, seed);
      const auto sv = linalg::singular_values(A).singular_values;
      double s = 0.0;
      for (double v : sv) s += v * v;
      CHECK(s == doctest::Approx(A.hs_norm_sq()).epsilon(1e-10));
    }
  }

  TEST_CASE("product of singular values is |det|") {
    for (std::uint64_t seed = 70; seed < 76; ++seed) {
      const Matrix A = random_matrix(5, 5, seed);
      const auto sv = linalg::singular_values(A).singular_values;
      double p = 1.0;
      for (double v : sv) p *= v;
      const double d = std::abs(oracles::det_full_pivot(A));
      CHECK(p == doctest::Approx(d).epsilon(1e-8));
    }
  }

  TEST_CASE("orthonormal basis") {
    Rng rng(17);
    std::vector<Vector> vecs;
    for (int i = 0; i < 4; ++i) vecs.push_back(unit_sphere(rng, 6));
    const auto basis = linalg::orthonormal_basis(vecs);
    CHECK(basis.requested == 4);
    CHECK(basis.rank == 4);
    for (std::size_t i = 0; i < basis.q.size(); ++i) {
      CHECK(norm(basis.q[i]) == doctest::Approx(1.0).epsilon(1e-12));
      for (std::size_t j = 0; j < i; ++j)
        CHECK(std::abs(dot(basis.q[i], basis.q[j])) <= 1e-12);
    }
    // exact dependency collapses the rank
    std::vector<Vector> dep = {vecs[0], vecs[1], vecs[0]};
    CHECK(linalg::orthonormal_basis(dep).rank == 2);
  }

  TEST_CASE("distance to subspace matches the normal-equation oracle") {
    Rng rng(18);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t dim = 8, k = 1 + rep % 5;
      std::vector<Vector> vecs;
      for (std::size_t i = 0; i < k; ++i) vecs.push_back(unit_sphere(rng, dim));
      Vector v = unit_sphere(rng, dim);
      scale(v, 2.5);
      const auto basis = linalg::orthonormal_basis(vecs);
      const double lib = linalg::dist_to_subspace(v, basis);
      const double ref = oracles::dist_to_span_normal_eq(v, vecs);
      CHECK(std::abs(lib - ref) <= 1e-8 * std::max(1.0, ref));
    }
    // distance to the empty span is the norm itself
    CHECK(linalg::dist_to_subspace({3.0, 4.0}, linalg::orthonormal_basis({})) ==
          doctest::Approx(5.0));
  }

  TEST_CASE("sparse distance equals keeping the largest magnitudes") {
    CHECK(linalg::dist_to_sparse({3.0, -4.0, 1.0}, 1) ==
          doctest::Approx(std::sqrt(9.0 + 1.0)));
    CHECK(linalg::dist_to_sparse({3.0, -4.0, 1.0}, 3) == 0.0);
    CHECK(linalg::dist_to_sparse({3.0, -4.0, 1.0}, 5) == 0.0);
    Rng rng(19);
    for (int rep = 0; rep < 40; ++rep) {
      const std::size_t n = 5 + rep % 8;
      Vector x(n);
      for (auto& v : x) v = rng.gaussian();
      const std::size_t k = rep % (n + 1);
      const double lib = linalg::dist_to_sparse(x, k);
      const double ref = oracles::dist_to_sparse_exhaustive(x, k);
      CHECK(std::abs(lib - ref) <= 1e-12 * std::max(1.0, ref));
    }
  }

  TEST_CASE("column-to-others distances against the basis route") {
    Rng rng(20);
    for (int rep = 0; rep < 10; ++rep) {
      const std::size_t n = 4 + rep % 4;
      const Matrix A = random_matrix(n, n, 300 + rep);
      const auto fast = linalg::column_to_others_distances(A);
      REQUIRE(fast.size() == n);
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<Vector> others;
        for (std::size_t c = 0; c < n; ++c)
          if (c != j) others.push_back(A.col(c));
        const double ref =
            linalg::dist_to_subspace(A.col(j), linalg::orthonormal_basis(others));
        CHECK(fast[j] == doctest::Approx(ref).epsilon(1e-8));
      }
    }
    // exactly singular matrix: the LU route reports failure with an empty
    // result instead of garbage
    Matrix S(3, 3);
    for (std::size_t j = 0; j < 3; ++j) {
      S(0, j) = 1.0;
      S(1, j) = 2.0;  // row 1 = 2 * row 0
      S(2, j) = static_cast<double>(j);
    }
    CHECK(linalg::column_to_others_distances(S).empty());
  }

  TEST_CASE("projecting out columns") {
    const Matrix A = random_matrix(8, 6, 555);
    const std::vector<std::size_t> keep = {4, 5};
    const auto pc = linalg::project_out_columns(A, keep);
    CHECK(pc.complement_full_rank);
    CHECK(pc.W.rows() == 8);
    CHECK(pc.W.cols() == 2);
    // every kept, projected column is orthogonal to every other column
    for (std::size_t c = 0; c < keep.size(); ++c) {
      const Vector w = pc.W.col(c);
      for (std::size_t j = 0; j < 4; ++j)
        CHECK(std::abs(dot(w, A.col(j))) <= 1e-9);
    }
    // and the projection never increases the norm
    for (std::size_t c = 0; c < keep.size(); ++c)
      CHECK(pc.W.col_norm_sq(c) <= A.col_norm_sq(keep[c]) + 1e-12);
  }

  TEST_CASE("smallest singular value never exceeds any column-to-span distance") {
    // sigma_n = min |Ax| over unit x; for unit e_j-aligned competitors the
    // distance from column j to the span of the others is an upper bound
    for (std::uint64_t seed = 700; seed < 708; ++seed) {
      const std::size_t n = 4 + seed % 5;
      const Matrix A = random_matrix(n, n, seed, seed % 3 != 0);
      const auto dist = linalg::column_to_others_distances(A);
      if (dist.empty()) continue;
      const double sn = linalg::smallest_singular_value(A);
      const double dmin = *std::min_element(dist.begin(), dist.end());
      CHECK(sn <= dmin + 1e-8);
    }
  }
}
