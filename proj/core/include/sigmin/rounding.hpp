#pragma once

// Random rounding onto anisotropic lattices.
//
// Given weights alpha in [0,1]^n and a scale nu > 0, coordinate i lives on
// the lattice  anchor_i + pitch_i * Z  with pitch_i = alpha_i * nu / sqrt(n).
// A point xi is rounded coordinate-wise: writing
//   xi_i - anchor_i = pitch_i * (k_i + p_i),  k_i integer, p_i in [0, 1),
// the rounded value goes down to k_i with probability 1 - p_i and up to
// k_i + 1 with probability p_i, independently across coordinates. Points
// already on the lattice (p_i == 0) are left untouched.
//
// Guarantees (the tests exercise all three):
//   * cage:        |eta_i - xi_i| <= pitch_i  surely (in floats the final
//                  addition can add half an ulp of xi_i; checks allow
//                  pitch_i * (1 + 1e-12) + 1e-15 * max(1, |xi_i|));
//   * unbiased:    E eta_i = xi_i;
//   * sub-gaussian inner products: for any g,
//       P(|<eta - xi, g>| >= t) <= 2 exp(-c n t^2 / (nu^2 sum alpha_i^2 g_i^2)).
//     The bound is provable with c = 2 (Hoeffding with the exact two-point
//     support width pitch_i); the toolkit reports the conservative floor
//     c = 1/2 (ranges padded to [-pitch_i, pitch_i]) as the documented
//     contract and treats anything between as headroom.
//   * expected energy: E |A(eta - xi)|^2 <= (nu^2 / 4n) sum alpha_i^2 |Ae_i|^2
//     (per-coordinate variance of a two-point distribution with gap pitch_i
//     is at most pitch_i^2 / 4).
//
// The anchor generalizes the plain lattice (anchor = 0) to the rounding
// used by net constructions, where each point is rounded on the lattice
// anchored at the center of the ball that covers it.

#include <cstdint>
#include <vector>

#include "sigmin/matrix.hpp"
#include "sigmin/rng.hpp"

namespace sigmin::rounding {

struct RoundingParams {
  double nu = 1.0;
  Vector alpha;   // weights in [0, 1], size n
  Vector anchor;  // lattice origin, size n (empty means 0)

  std::size_t dim() const { return alpha.size(); }
  double pitch(std::size_t i) const;
  double anchor_at(std::size_t i) const {
    return anchor.empty() ? 0.0 : anchor[i];
  }
  void validate() const;  // throws std::invalid_argument
};

struct RoundedPoint {
  Vector eta;                   // the rounded vector
  std::vector<long long> k;     // lattice indices: eta_i = anchor_i + pitch_i * k_i
                                // (k_i = 0 where pitch_i == 0 or the point
                                //  was already on the lattice; see on_lattice)
  std::vector<bool> on_lattice; // coordinate was exact, eta_i == xi_i

  // number of coordinates whose lattice index is nonzero; with anchor = 0
  // this is the support size of eta as a lattice vector
  std::size_t nonzero_index_count() const;
};

// One random rounding draw. Requires |xi_i - anchor_i| <= 2^40 * pitch_i
// whenever pitch_i > 0 (keeps the float decomposition exact to ~1e-4
// lattice cells; all toolkit uses are orders of magnitude below this).
RoundedPoint random_round(const Vector& xi, const RoundingParams& params,
                          Rng& rng);

// Deterministic reconstruction of the lattice point for index vector k.
Vector lattice_point(const RoundingParams& params,
                     const std::vector<long long>& k);

// The sub-gaussian tail bound above at level c (default: documented floor).
double inner_product_tail_bound(const RoundingParams& params, const Vector& g,
                                double t, double c = 0.5);

// (nu^2 / 4n) * sum_i alpha_i^2 * col_norms_sq_i  -- the exact bound on
// E |A(eta - xi)|^2 used by net witness searches.
double expected_energy_bound(const RoundingParams& params,
                             const Vector& col_norms_sq);

}  // namespace sigmin::rounding
