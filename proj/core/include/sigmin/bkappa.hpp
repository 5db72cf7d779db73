#pragma once

// The column-weighting functional
//
//   B_kappa(A) = min { sum_i alpha_i^2 |A e_i|^2 :
//                      alpha_i in [0, 1],  prod_i alpha_i >= kappa^{-n} },
//
// a volume-constrained averaging of the squared column norms that replaces
// the Hilbert-Schmidt norm when columns may be heavy-tailed. The module
// works with y_i = |A e_i|^2 directly.
//
// The exact solver is water-filling: the KKT stationarity condition for the
// (convex after substituting t_i = log alpha_i) problem gives
//   alpha_i(lambda) = min(1, sqrt(lambda / (2 y_i))),
// and the dual multiplier lambda is located by monotone bisection on the
// log-product constraint sum_i log alpha_i = -n log kappa. Coordinates with
// y_i = 0 take alpha_i = 1 and drop out. For kappa = 1 the only feasible
// point is alpha = 1 and the value is sum_i y_i exactly.
//
// b_kappa_bruteforce is an independent exhaustive check on a uniform grid
// {1/S, ..., S/S}^n with branch-and-bound pruning. Rounding the true
// minimizer UP to the grid keeps it feasible (the product only grows) and
// increases the objective by at most
//   sum_i ((alpha_i + 1/S)^2 - alpha_i^2) y_i <= (2/S + 1/S^2) sum_i y_i,
// so  grid_min - exact_min <= 2.25 sum_i y_i / S  for S >= 4 -- the
// documented optimality gap used by the tests (conservatively 2 sum y / S
// plus the 1/S^2 term, folded into kGapFactor below).

#include <cstddef>
#include <vector>

#include "sigmin/matrix.hpp"

namespace sigmin::bkappa {

struct AlphaVector {
  Vector alpha;
  double kappa = 1.0;

  double log_product() const;
  // alpha in [0,1] (tiny slack) and log prod >= -n log kappa - tol
  bool is_feasible(double log_tol = 1e-9) const;
};

struct BKappaResult {
  double value = 0.0;       // sum alpha_i^2 y_i at the minimizer
  AlphaVector minimizer;    // the optimal alpha (feasible by construction)
  double multiplier = 0.0;  // KKT dual variable lambda for the log-product
  std::vector<bool> active_caps;  // alpha_i == 1
};

// Exact minimization given squared column norms y_i >= 0. kappa >= 1.
BKappaResult b_kappa(const Vector& col_norms_sq, double kappa);

// Convenience: computes the squared column norms of A first.
BKappaResult b_kappa_matrix(const Matrix& A, double kappa);

// Max KKT violation of a result: stationarity 2 alpha_i^2 y_i = lambda on
// uncapped coordinates (relative to lambda), dual feasibility
// lambda >= 2 y_i on capped ones, and primal feasibility. Small (<= 1e-8)
// for solver output.
double kkt_residual(const Vector& col_norms_sq, const BKappaResult& r);

// Exhaustive grid minimum with pruning; n <= 4 and grid_steps <= 400.
// Returns the best grid value (>= exact minimum, within the gap above).
struct BruteForceResult {
  double value = 0.0;
  Vector alpha;
  std::size_t nodes_visited = 0;
};
BruteForceResult b_kappa_bruteforce(const Vector& col_norms_sq, double kappa,
                                    std::size_t grid_steps);

// documented optimality gap of the grid search
inline double bruteforce_gap(const Vector& col_norms_sq,
                             std::size_t grid_steps) {
  double s = 0.0;
  for (double y : col_norms_sq) s += y;
  const double S = static_cast<double>(grid_steps);
  return (2.0 / S + 1.0 / (S * S)) * s;
}

// Deviation certificate: with realized squared norms y_i and column moment
// scales m_i = (E |A e_i|^{2p})^{1/p}, the weights
//   alpha_i^2 = min(1, s m_i / y_i)
// satisfy sum alpha_i^2 y_i <= s sum_i m_i < 2 s sum_i m_i by construction,
// so B_kappa(A) < 2 s sum_i m_i whenever the product constraint also holds.
// Feasibility of the product is a random event; the caller checks
// is_feasible() against its kappa (stored in the result).
AlphaVector certificate_alpha(const Vector& col_norms_sq,
                              const Vector& mean_norms_sq, double s,
                              double kappa);

// Tail bound  P(B_kappa(A) >= 2 s sum_i m_i) <= kappa^{-2pn} (1 + s^{-p})^n
// (columns independent, m_i as above, any p > 0, s > 0): the certificate
// objective can never exceed s sum m_i, and the probability that its product
// fails the constraint is at most kappa^{-2pn} E prod (1 + y_i^p/(s m_i)^p).
double deviation_probability_bound(double kappa, std::size_t n, double p,
                                   double s);

}  // namespace sigmin::bkappa
