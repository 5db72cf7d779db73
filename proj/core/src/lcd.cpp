#include "sigmin/lcd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "sigmin/rng.hpp"

namespace sigmin::lcd {

namespace {

constexpr double kFeasSlack = 1e-12;  // slack toward feasibility
constexpr double kExclSlack = 1e-12;  // margin required to exclude

}  // namespace

double lcd_dist(double theta, const Vector& a) {
  double sum = 0.0;
  for (double ai : a) {
    const double x = theta * ai;
    const double d = x - std::nearbyint(x);
    sum += d * d;
  }
  return std::sqrt(sum);
}

double lcd_gap(double theta, const Vector& a, double norm_a, double alpha,
               double c) {
  return lcd_dist(theta, a) - std::min(c * theta * norm_a, alpha);
}

LcdResult lcd_vector(const LcdQuery& query) {
  const Vector& a = query.a;
  const double norm_a = norm(a);
  if (!(norm_a > 0.0)) throw std::invalid_argument("lcd_vector: |a| == 0");
  if (!(query.alpha > 0.0))
    throw std::invalid_argument("lcd_vector: alpha must be positive");
  if (!(query.c > 0.0) || !(query.c < 1.0))
    throw std::invalid_argument("lcd_vector: c must lie in (0, 1)");
  if (!(query.tol > 0.0))
    throw std::invalid_argument("lcd_vector: tol must be positive");
  const double cap = query.cap > 0.0 ? query.cap : 1e9 / norm_a;
  if (cap * norm_a > 1e9 * (1.0 + 1e-12))
    throw std::invalid_argument("lcd_vector: cap * |a| exceeds 1e9");

  const double lipschitz = (1.0 + query.c) * norm_a;
  // Splitting stops once an interval is at double resolution for its own
  // position; what is left then is a graze of the gap function resolved
  // toward feasibility (consistent with the boundary slack).
  auto width_floor_at = [&](double theta) {
    return std::max(query.tol * 1e-6, theta * 1e-14);
  };

  LcdResult res;
  auto gap_at = [&](double theta) {
    ++res.evaluations;
    const double g = lcd_gap(theta, a, norm_a, query.alpha, query.c);
    if (query.record_trace) res.trace.push_back(LcdEval{theta, g});
    return g;
  };

  // Analytic prefix exclusion: for theta <= theta0 = 1/(2 max|a_i|) every
  // coordinate has |theta a_i| <= 1/2, so dist(theta a, Z^m) = theta |a|
  // exactly.  Feasibility would need theta |a| < min(c theta |a|, alpha);
  // the first branch is impossible (c < 1) and the second applies only when
  // c theta |a| >= alpha, forcing theta |a| >= alpha / c > alpha — a
  // contradiction.  So (0, theta0] is certifiably infeasible, which removes
  // the tangential zero of the gap function at theta = 0 (where the
  // midpoint-Lipschitz test could never certify exclusion).
  double max_abs = 0.0;
  for (double ai : a) max_abs = std::max(max_abs, std::fabs(ai));
  const double theta0 = 0.5 / max_abs;
  if (cap <= theta0) {
    res.status = LcdStatus::kExceedsCap;
    res.lo = cap;
    res.hi = std::numeric_limits<double>::infinity();
    return res;
  }

  double best = std::numeric_limits<double>::infinity();
  double frontier = theta0;  // (0, frontier] certified infeasible
  std::vector<std::pair<double, double>> stack;
  stack.emplace_back(theta0, cap);

  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    if (lo >= best) continue;
    hi = std::min(hi, best);
    if (hi <= lo) continue;
    if (best - frontier <= query.tol && std::isfinite(best)) break;

    const double mid = 0.5 * (lo + hi);
    const double halfwidth = 0.5 * (hi - lo);
    const double g = gap_at(mid);
    if (g >= lipschitz * halfwidth + kExclSlack) {
      ++res.exclusions;
      if (lo <= frontier + kExclSlack * std::max(1.0, cap))
        frontier = std::max(frontier, hi);
      continue;
    }
    if (g < kFeasSlack) {
      best = std::min(best, mid);
      stack.emplace_back(lo, mid);
      continue;
    }
    if (halfwidth <= width_floor_at(mid)) {
      // cannot exclude at the width floor: the interval minimum is below
      // kFeasSlack + 2*lipschitz*halfwidth, so count it feasible per the
      // boundary slack rule
      best = std::min(best, mid);
      continue;
    }
    // ascending order: the left half must pop first
    stack.emplace_back(mid, hi);
    stack.emplace_back(lo, mid);
  }

  if (!std::isfinite(best)) {
    res.status = LcdStatus::kExceedsCap;
    res.lo = cap;
    res.hi = std::numeric_limits<double>::infinity();
    return res;
  }
  res.status = LcdStatus::kFound;
  res.lo = std::min(frontier, best);
  res.hi = best;
  return res;
}

double lcd_e1_value(double alpha, double c) {
  return std::max(1.0 / (1.0 + c), 1.0 - alpha);
}

SubspaceLcdEstimate subspace_lcd_heuristic(const std::vector<Vector>& basis,
                                           double alpha, double c, double cap,
                                           double tol, std::size_t samples,
                                           std::uint64_t seed) {
  if (basis.empty())
    throw std::invalid_argument("subspace_lcd_heuristic: empty basis");
  const std::size_t m = basis.front().size();
  for (const Vector& b : basis)
    if (b.size() != m)
      throw std::invalid_argument("subspace_lcd_heuristic: ragged basis");

  SubspaceLcdEstimate est;
  est.samples = samples;
  est.value = std::numeric_limits<double>::infinity();
  Rng rng(derive(seed, 0x6c636473ull));
  for (std::size_t t = 0; t < samples; ++t) {
    const Vector coeff = unit_sphere(rng, basis.size());
    Vector v(m, 0.0);
    for (std::size_t b = 0; b < basis.size(); ++b)
      axpy(coeff[b], basis[b], v);
    const double nv = norm(v);
    if (!(nv > 0.0)) continue;
    scale(v, 1.0 / nv);
    LcdQuery query;
    query.a = std::move(v);
    query.alpha = alpha;
    query.c = c;
    query.cap = cap;
    query.tol = tol;
    const LcdResult r = lcd_vector(query);
    if (r.status == LcdStatus::kFound) {
      ++est.found;
      est.value = std::min(est.value, r.hi);
    }
  }
  return est;
}

}  // namespace sigmin::lcd
