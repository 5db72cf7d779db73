#include "sigmin/rounding.hpp"

#include <cmath>
#include <stdexcept>

namespace sigmin::rounding {

double RoundingParams::pitch(std::size_t i) const {
  return alpha[i] * nu / std::sqrt(static_cast<double>(alpha.size()));
}

void RoundingParams::validate() const {
  if (alpha.empty())
    throw std::invalid_argument("rounding: alpha must be nonempty");
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw std::invalid_argument("rounding: nu must be positive and finite");
  for (double a : alpha)
    if (!(a >= 0.0) || a > 1.0 + 1e-12)
      throw std::invalid_argument("rounding: alpha_i must lie in [0, 1]");
  if (!anchor.empty() && anchor.size() != alpha.size())
    throw std::invalid_argument("rounding: anchor size mismatch");
}

std::size_t RoundedPoint::nonzero_index_count() const {
  std::size_t c = 0;
  for (long long v : k) c += v != 0;
  return c;
}

RoundedPoint random_round(const Vector& xi, const RoundingParams& params,
                          Rng& rng) {
  params.validate();
  const std::size_t n = params.dim();
  if (xi.size() != n)
    throw std::invalid_argument("random_round: dimension mismatch");
  RoundedPoint out;
  out.eta.resize(n);
  out.k.assign(n, 0);
  out.on_lattice.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double pitch = params.pitch(i);
    const double a = params.anchor_at(i);
    if (pitch == 0.0) {
      // degenerate coordinate: no lattice, the point stays put
      out.eta[i] = xi[i];
      out.on_lattice[i] = true;
      continue;
    }
    const double t = (xi[i] - a) / pitch;
    if (std::abs(t) > 0x1p40)
      throw std::invalid_argument(
          "random_round: |xi - anchor| too many pitches away");
    const double kd = std::floor(t);
    const double p = t - kd;  // in [0, 1)
    long long ki = static_cast<long long>(kd);
    if (p == 0.0) {
      // already a lattice point; keep the float value bit-exact
      out.eta[i] = xi[i];
      out.k[i] = ki;
      out.on_lattice[i] = true;
      continue;
    }
    const bool up = rng.unit() < p;  // up with probability p
    if (up) ++ki;
    out.k[i] = ki;
    // eta = xi + pitch * delta with |delta| < 1 keeps the cage bound exact
    // in floating point (|pitch * delta| <= pitch under round-to-nearest);
    // the stored index ki identifies the canonical lattice point, whose
    // reconstruction via lattice_point() may differ from eta by float noise.
    const double delta = up ? 1.0 - p : -p;
    out.eta[i] = xi[i] + pitch * delta;
  }
  return out;
}

Vector lattice_point(const RoundingParams& params,
                     const std::vector<long long>& k) {
  params.validate();
  const std::size_t n = params.dim();
  if (k.size() != n)
    throw std::invalid_argument("lattice_point: dimension mismatch");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = params.anchor_at(i) + params.pitch(i) * static_cast<double>(k[i]);
  return x;
}

double inner_product_tail_bound(const RoundingParams& params, const Vector& g,
                                double t, double c) {
  params.validate();
  const std::size_t n = params.dim();
  if (g.size() != n)
    throw std::invalid_argument("inner_product_tail_bound: size mismatch");
  if (!(t > 0.0)) return 2.0;  // vacuous
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += params.alpha[i] * params.alpha[i] * g[i] * g[i];
  if (s == 0.0) return 0.0;  // eta - xi is orthogonal to g surely
  const double expo =
      -c * static_cast<double>(n) * t * t / (params.nu * params.nu * s);
  return std::min(2.0, 2.0 * std::exp(expo));
}

double expected_energy_bound(const RoundingParams& params,
                             const Vector& col_norms_sq) {
  params.validate();
  const std::size_t n = params.dim();
  if (col_norms_sq.size() != n)
    throw std::invalid_argument("expected_energy_bound: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += params.alpha[i] * params.alpha[i] * col_norms_sq[i];
  return params.nu * params.nu / (4.0 * static_cast<double>(n)) * s;
}

}  // namespace sigmin::rounding
