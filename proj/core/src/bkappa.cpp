#include "sigmin/bkappa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sigmin::bkappa {

namespace {

double checked_kappa(double kappa) {
  if (!(kappa >= 1.0))
    throw std::invalid_argument("b_kappa: kappa must be >= 1");
  return kappa;
}

void check_norms(const Vector& y) {
  if (y.empty()) throw std::invalid_argument("b_kappa: empty column norms");
  for (double v : y)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument(
          "b_kappa: squared norms must be finite and >= 0");
}

// sum of log alpha_i(lambda) over coordinates with y_i > 0, where
// alpha_i(lambda) = min(1, sqrt(lambda / (2 y_i)))
double log_product_at(const Vector& y, double lambda) {
  double s = 0.0;
  for (double yi : y) {
    if (yi <= 0.0) continue;
    const double a2 = lambda / (2.0 * yi);
    if (a2 < 1.0) s += 0.5 * std::log(a2);
  }
  return s;
}

}  // namespace

double AlphaVector::log_product() const {
  double s = 0.0;
  for (double a : alpha) {
    if (a <= 0.0) return -std::numeric_limits<double>::infinity();
    s += std::log(a);
  }
  return s;
}

bool AlphaVector::is_feasible(double log_tol) const {
  for (double a : alpha)
    if (!(a >= 0.0) || a > 1.0 + 1e-12) return false;
  const double target = -static_cast<double>(alpha.size()) * std::log(kappa);
  return log_product() >= target - log_tol;
}

BKappaResult b_kappa(const Vector& col_norms_sq, double kappa) {
  check_norms(col_norms_sq);
  checked_kappa(kappa);
  const Vector& y = col_norms_sq;
  const std::size_t n = y.size();

  BKappaResult r;
  r.minimizer.kappa = kappa;
  r.minimizer.alpha.assign(n, 1.0);
  r.active_caps.assign(n, true);

  const double target = -static_cast<double>(n) * std::log(kappa);
  const double ymax = *std::max_element(y.begin(), y.end());

  // kappa == 1 forces alpha = 1; so does an all-zero norm vector.
  if (kappa == 1.0 || ymax == 0.0) {
    r.value = std::accumulate(y.begin(), y.end(), 0.0);
    r.multiplier = 0.0;
    return r;
  }

  // The log product increases monotonically in lambda, reaching 0 (all
  // coordinates capped) at lambda = 2 ymax, so [0, 2 ymax] brackets the
  // solution of logprod(lambda) = target < 0. The invariant
  // logprod(hi) >= target keeps the final alpha primal feasible.
  double lo = 0.0, hi = 2.0 * ymax;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double f = log_product_at(y, mid) - target;
    if (f >= 0.0)
      hi = mid;
    else
      lo = mid;
    if (f >= 0.0 && f <= 1e-12 * std::max(1.0, std::abs(target))) break;
  }
  const double lambda = hi;

  r.multiplier = lambda;
  r.value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = 1.0;
    bool capped = true;
    if (y[i] > 0.0) {
      const double a2 = lambda / (2.0 * y[i]);
      if (a2 < 1.0) {
        a = std::sqrt(a2);
        capped = false;
      }
    }
    r.minimizer.alpha[i] = a;
    r.active_caps[i] = capped;
    r.value += a * a * y[i];
  }
  return r;
}

BKappaResult b_kappa_matrix(const Matrix& A, double kappa) {
  Vector y(A.cols());
  for (std::size_t j = 0; j < A.cols(); ++j) y[j] = A.col_norm_sq(j);
  return b_kappa(y, kappa);
}

double kkt_residual(const Vector& col_norms_sq, const BKappaResult& r) {
  const Vector& y = col_norms_sq;
  const std::size_t n = y.size();
  if (r.minimizer.alpha.size() != n || r.active_caps.size() != n)
    throw std::invalid_argument("kkt_residual: size mismatch");
  const double lambda = r.multiplier;
  const double scale = std::max(lambda, 1e-300);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = r.minimizer.alpha[i];
    if (r.active_caps[i]) {
      // capped coordinate: the cap multiplier mu_i = lambda - 2 y_i must be
      // nonnegative (the unconstrained stationary point would exceed 1)
      if (y[i] > 0.0)
        worst = std::max(worst, std::max(0.0, 2.0 * y[i] - lambda) / scale);
    } else {
      // stationarity: 2 alpha^2 y_i = lambda
      worst = std::max(worst, std::abs(2.0 * a * a * y[i] - lambda) / scale);
    }
  }
  // primal feasibility, log domain
  const double target = -static_cast<double>(n) * std::log(r.minimizer.kappa);
  const double slack = r.minimizer.log_product() - target;
  if (slack < 0.0) worst = std::max(worst, -slack);
  return worst;
}

BruteForceResult b_kappa_bruteforce(const Vector& col_norms_sq, double kappa,
                                    std::size_t grid_steps) {
  check_norms(col_norms_sq);
  checked_kappa(kappa);
  const std::size_t n = col_norms_sq.size();
  if (n > 4)
    throw std::invalid_argument("b_kappa_bruteforce: n <= 4 required");
  if (grid_steps == 0 || grid_steps > 400)
    throw std::invalid_argument(
        "b_kappa_bruteforce: grid_steps in [1, 400] required");

  // visit coordinates with large norms first so objective pruning bites
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return col_norms_sq[a] > col_norms_sq[b];
  });

  const double S = static_cast<double>(grid_steps);
  const double target = -static_cast<double>(n) * std::log(kappa);
  std::vector<double> grid(grid_steps), log_grid(grid_steps), sq(grid_steps);
  for (std::size_t k = 0; k < grid_steps; ++k) {
    grid[k] = static_cast<double>(k + 1) / S;
    log_grid[k] = std::log(grid[k]);
    sq[k] = grid[k] * grid[k];
  }
  // suffix sums of y in visiting order, for remaining-objective bounds
  std::vector<double> y_suffix(n + 1, 0.0);
  for (std::size_t d = n; d-- > 0;)
    y_suffix[d] = y_suffix[d + 1] + col_norms_sq[order[d]];

  BruteForceResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.alpha.assign(n, 1.0);
  std::vector<double> current(n, 1.0);
  std::size_t nodes = 0;

  // Depth-first scan, alpha descending per coordinate. Two prunings:
  //  * feasibility: remaining coordinates contribute at most log 1 = 0, so
  //    any product deficit must be carried by EVERY remaining alpha
  //    (each alpha_j >= exp(deficit), because the others are <= 1); a
  //    deficit with exp(deficit) > 1 can never be recovered, and smaller
  //    alphas at this depth only deepen it -> break;
  //  * objective: partial objective plus amin^2 * (remaining y sum) already
  //    beats the incumbent -> skip this alpha (not monotone in the scan
  //    direction because amin grows as alpha shrinks -> continue).
  auto dfs = [&](auto&& self, std::size_t depth, double obj,
                 double logprod) -> void {
    ++nodes;
    if (depth == n) {
      if (logprod >= target - 1e-12 && obj < best.value) {
        best.value = obj;
        best.alpha = current;
      }
      return;
    }
    const double yi = col_norms_sq[order[depth]];
    for (std::size_t k = grid_steps; k-- > 0;) {
      const double new_logprod = logprod + log_grid[k];
      const double deficit = target - new_logprod;
      double amin = 1.0 / S;
      if (deficit > 1e-12) {
        if (depth + 1 == n) break;  // leaf would be infeasible
        amin = std::exp(deficit);
        if (amin > 1.0 + 1e-12) break;  // unrecoverable
        amin = std::max(amin, 1.0 / S);
      }
      const double new_obj = obj + sq[k] * yi;
      if (new_obj + amin * amin * y_suffix[depth + 1] >= best.value) continue;
      current[order[depth]] = grid[k];
      self(self, depth + 1, new_obj, new_logprod);
    }
    current[order[depth]] = 1.0;
  };
  dfs(dfs, 0, 0.0, 0.0);

  best.nodes_visited = nodes;
  if (!std::isfinite(best.value))
    throw std::logic_error("b_kappa_bruteforce: no feasible grid point");
  return best;
}

AlphaVector certificate_alpha(const Vector& col_norms_sq,
                              const Vector& mean_norms_sq, double s,
                              double kappa) {
  check_norms(col_norms_sq);
  if (mean_norms_sq.size() != col_norms_sq.size())
    throw std::invalid_argument("certificate_alpha: size mismatch");
  AlphaVector out;
  out.kappa = kappa;
  out.alpha.resize(col_norms_sq.size());
  for (std::size_t i = 0; i < col_norms_sq.size(); ++i) {
    const double y = col_norms_sq[i];
    const double m = mean_norms_sq[i];
    if (y <= 0.0) {
      out.alpha[i] = 1.0;
      continue;
    }
    out.alpha[i] = std::sqrt(std::min(1.0, s * m / y));
  }
  return out;
}

double deviation_probability_bound(double kappa, std::size_t n, double p,
                                   double s) {
  if (!(kappa > 1.0) || !(p > 0.0) || !(s > 0.0))
    throw std::invalid_argument(
        "deviation_probability_bound: need kappa > 1, p > 0, s > 0");
  const double nn = static_cast<double>(n);
  const double log_bound =
      -2.0 * p * nn * std::log(kappa) + nn * std::log1p(std::pow(s, -p));
  return std::exp(log_bound);
}

}  // namespace sigmin::bkappa
