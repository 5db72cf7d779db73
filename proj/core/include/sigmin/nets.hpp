#pragma once

// Cover and net constructions.
//
// Building blocks:
//
//  * ball_cube_cover      -- minimal lattice covering of a euclidean ball
//                            eps B_2^n by closed cubes of half-side
//                            eps*gamma/sqrt(n) centered at lattice points
//                            (spacing = one side). A cube belongs to the
//                            cover iff it intersects the ball (exact clamp
//                            test), which makes the cover minimal and the
//                            zero-miss property automatic: the cube whose
//                            center is nearest to a ball point contains it.
//
//  * integer_cell_cover   -- minimal set of integer points w such that the
//                            cells w + [-1,1]^n cover x + sqrt(n) B_2^n.
//                            Every w lies within 2 sqrt(n) of x (cell
//                            intersects the ball), comfortably inside the
//                            3 sqrt(n) B_2^n + x membership contract, and
//                            the count is at most C^n.
//
//  * unit_cube_parallelepiped_cover -- covering of [-1/2, 1/2]^n by boxes
//                            with half-sides alpha_i, floor(1/alpha_i)
//                            translates per axis (overhang split evenly).
//                            floor(1/a) * 2a >= 1 for a in (0, 1], so the
//                            axis is covered, and the total count is at
//                            most prod 1/alpha_i <= kappa^n for
//                            alpha in Omega_kappa.
//
//  * sphere_cover         -- greedy farthest-point cover of the unit sphere
//                            at radius eps, certified on a fresh sample at
//                            radius 2 eps. Exact for n = 1 ({+1, -1}).
//
//  * dominating_weight_family -- a finite family F of weight vectors beta
//                            such that every alpha with prod alpha_i >=
//                            kappa^{-n} is dominated coordinatewise
//                            (beta_i <= alpha_i for all i) by some member.
//                            Built by mapping alpha to the ball-orthant
//                            point a_i = sqrt(log(1/alpha_i) / (n log k)),
//                            covering the orthant piece of the ball by
//                            cubes of half-side mu/sqrt(n), and mapping
//                            each cube's dominating corner back. Corners
//                            are clamped to the smallest point that still
//                            dominates the cube's intersection with the
//                            ball, which keeps every member's own product
//                            constraint moderate: beta is feasible for
//                            kappa_eff = kappa^{|v|^2}, recorded per member.
//                            #F <= (C/mu)^n.
//
//  * build_main_net       -- the composite construction: covering centers
//                            x_j (an eps-cover of the point set of
//                            interest), the weight family F, and for each
//                            (x_j, beta) the lattice patch
//                              { x_j + pitch .* k :
//                                dist_2(x_j, box(w, pitch)) <= eps }
//                            with pitch_i = beta_i * eps * gamma / sqrt(n)
//                            -- exactly the set of points reachable by the
//                            anchored random rounding of any xi in the ball
//                            x_j + eps B_2^n. Case tag by the weight scale:
//                              sparse (log kappa <= log 2 / gamma^0.09):
//                                members are additionally filtered to
//                                lattice support <= n / gamma^0.08 and
//                                |w - x_j| <= 3 gamma eps; roundings land
//                                in the net w.p. >= 9/10.
//                              vertex (otherwise): all reachable points.
//                            The net is kept as a generator (centers +
//                            family + rule); materialization enumerates
//                            points under a hard guard. Membership of a
//                            rounding outcome is decided exactly from its
//                            integer indices.
//
// Witness contract: for any matrix A and any covered x, rounding with the
// family member minimizing sum beta_i^2 |Ae_i|^2 gives
//   E |A(x - eta)|^2 <= M := (eps^2 gamma^2 / 4n) min_beta sum beta_i^2 |Ae_i|^2,
// and M <= (eps^2 gamma^2 / 4n) B_kappa(A) by domination. Each draw lands
// in the net (always in the vertex case, w.p. >= 9/10 in the sparse case)
// and satisfies |A(x - eta)|^2 <= 2M w.p. >= 1/2 (Markov), so a witness at
// the 2M level is found within 200 draws except with probability < 0.6^200.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigmin/matrix.hpp"
#include "sigmin/rng.hpp"
#include "sigmin/rounding.hpp"

namespace sigmin::nets {

// ---------- generic cover verification ----------

struct CoverCheck {
  std::size_t samples = 0;
  std::size_t misses = 0;
  double max_miss_distance = 0.0;  // how far the worst miss was from cover
};

// ---------- cube cover of a ball ----------

struct CubeCover {
  std::size_t n = 0;
  Vector center;           // covered ball center
  double radius = 0.0;     // covered ball radius (eps)
  double half_side = 0.0;  // cube half-side eps*gamma/sqrt(n)
  double spacing = 0.0;    // lattice spacing (pitch) = 2 * half_side
  std::vector<std::vector<long long>> cells;  // cell centers = spacing * k

  std::size_t count() const { return cells.size(); }
};

// cover of center + eps B_2^n by the absolute lattice tiling of pitch
// 2*eps*gamma/sqrt(n); gamma in (0, sqrt(n)]
CubeCover ball_cube_cover(const Vector& center, double eps, double gamma,
                          std::size_t cell_guard = 100000000);

CoverCheck verify_cube_cover(const CubeCover& cover, std::size_t samples,
                             std::uint64_t seed);

// fitted constant for the bound shape (C0/gamma)^n
double cube_cover_constant(const CubeCover& cover, double gamma);
// fitted constant C1 for the bound shape (C1*gamma)^(n/gamma^2)
double cube_cover_subexp_constant(const CubeCover& cover, double gamma);

// ---------- integer-cell cover of x + sqrt(n) B_2^n ----------

struct IntegerCellCover {
  Vector center;
  std::vector<std::vector<long long>> cells;  // cells are w + [-1,1]^n

  std::size_t count() const { return cells.size(); }
};

IntegerCellCover integer_cell_cover(const Vector& x,
                                    std::size_t cell_guard = 100000000);

CoverCheck verify_integer_cell_cover(const IntegerCellCover& cover,
                                     std::size_t samples, std::uint64_t seed);

// fitted constant for the bound shape C^n
double integer_cell_cover_constant(const IntegerCellCover& cover);

// ---------- parallelepiped cover of the centered unit cube ----------

struct ParallelepipedCover {
  Vector half_sides;                // alpha_i in (0, 1]
  std::vector<std::size_t> counts;  // floor(1/alpha_i) per axis
  Vector start;  // first center per axis; centers: start_i + 2 alpha_i t

  std::size_t total() const {
    std::size_t t = 1;
    for (std::size_t c : counts) t *= c;
    return t;
  }
};

// alpha must lie in (0,1]^n. When kappa > 0 is passed, alpha is checked for
// prod alpha_i >= kappa^{-n} (throws std::domain_error otherwise), which
// guarantees total() <= kappa^n.
ParallelepipedCover unit_cube_parallelepiped_cover(const Vector& alpha,
                                                   double kappa = 0.0);

CoverCheck verify_parallelepiped_cover(const ParallelepipedCover& cover,
                                       std::size_t samples,
                                       std::uint64_t seed);

// ---------- sphere covers and samples ----------

struct SphereCover {
  std::size_t n = 0;
  double eps = 0.0;
  std::vector<Vector> centers;
  double sample_radius = 0.0;     // achieved cover radius on the work pool
  double certified_radius = 0.0;  // max distance seen on the fresh batch
};

// Greedy farthest-point cover at radius eps over a quasi-uniform pool, then
// certification on a fresh pool at 2*eps (throws std::runtime_error if the
// certification fails). pool_budget 0 picks a heuristic; a guard throws if
// the heuristic exceeds 500000 points (use sphere_sample instead).
SphereCover sphere_cover(std::size_t n, double eps, std::uint64_t seed,
                         std::size_t pool_budget = 0,
                         std::size_t cert_batch = 20000);

// dist-to-centers check on fresh points at radius 2*eps
CoverCheck verify_sphere_cover(const SphereCover& cover, std::size_t samples,
                               std::uint64_t seed);

// iid uniform sample of the unit sphere
std::vector<Vector> sphere_sample(std::size_t n, std::size_t count,
                                  std::uint64_t seed);

// ---------- dominating weight family ----------

struct WeightFamily {
  std::size_t n = 0;
  double kappa = 1.0;
  double mu = 0.0;
  std::vector<Vector> betas;      // members, in (0,1]^n
  std::vector<double> kappa_eff;  // member i is feasible for kappa_eff[i]

  std::size_t size() const { return betas.size(); }
};

// T and its inverse: weights <-> ball-orthant coordinates
double weight_to_ball_coord(double alpha, double kappa, std::size_t n);
double ball_coord_to_weight(double v, double kappa, std::size_t n);

WeightFamily dominating_weight_family(std::size_t n, double kappa, double mu);

// index of the member minimizing sum beta_i^2 y_i
std::size_t best_member(const WeightFamily& family, const Vector& col_norms_sq);

// fitted constant for the bound shape (C/mu)^n
double weight_family_constant(const WeightFamily& family);

// ---------- the main net ----------

enum class NetCase { kSparse, kVertex };

struct NetParams {
  std::size_t n = 0;
  double eps = 0.0;
  double gamma = 0.0;
  double kappa = 1.0;
  std::size_t materialize_guard = 5000000;
};

struct Net {
  NetParams params;
  NetCase net_case = NetCase::kVertex;
  double mu = 0.0;
  std::vector<Vector> centers;  // covering centers x_j
  WeightFamily family;
  double sparse_support_cap = 0.0;  // n / gamma^0.08
  double sparse_ball_radius = 0.0;  // 3 * gamma * eps

  const char* case_name() const {
    return net_case == NetCase::kSparse ? "sparse" : "vertex";
  }
};

// centers: an eps-cover of the point set the net will serve
Net build_main_net(std::vector<Vector> centers, const NetParams& params);

// rounding parameters used for (center j, member b): nu = eps*gamma,
// alpha = beta_b, anchor = x_j
rounding::RoundingParams net_rounding_params(const Net& net, std::size_t j,
                                             std::size_t b);

struct NetPoint {
  std::size_t center_index = 0;
  std::size_t beta_index = 0;
  std::vector<long long> k;
};

bool net_contains(const Net& net, const NetPoint& p);
Vector net_point_value(const Net& net, const NetPoint& p);

// number of lattice points of patch (j, b); exact DFS enumeration count
std::size_t count_net_points(const Net& net, std::size_t j, std::size_t b);

struct MaterializedNet {
  std::vector<NetPoint> points;
};
// throws std::length_error if the total exceeds params.materialize_guard
MaterializedNet materialize(const Net& net);

// fitted constant per the claimed cardinality shape, from a per-center
// point count: vertex: C with count_per_center = (C kappa log kappa)^n;
// sparse: C1 with count_per_center = (C1 gamma)^(n / gamma^0.08)
double net_cardinality_constant(const Net& net, double count_per_center);

// ---------- witness search ----------

struct WitnessResult {
  bool found = false;
  std::size_t draws_used = 0;
  std::size_t rejected_membership = 0;  // sparse-case rejections
  double bound_2m = 0.0;                // the 2M threshold used
  double achieved = 0.0;                // |A(x - y)|^2 of the witness (or
                                        // best seen if not found)
  NetPoint point;
  Vector y;
  std::size_t center_index = 0;
  std::size_t beta_index = 0;
};

// Rounds x (which must lie within eps of some center) at most max_draws
// times with the best family member for A's column norms; succeeds when a
// draw lands in the net and satisfies |A(x - eta)|^2 <= 2M. Throws
// std::invalid_argument if no center covers x.
WitnessResult find_net_witness(const Net& net, const Matrix& A,
                               const Vector& x, Rng& rng,
                               std::size_t max_draws = 200);

// ---------- net file format (text, version 1) ----------

// `comments` lines (if any) are written after the version header prefixed
// with "# "; they carry free-form metadata such as the cardinality ledger
// and are skipped on load.
void save_net(const Net& net, const std::string& path,
              const MaterializedNet* points = nullptr,
              const std::vector<std::string>* comments = nullptr);
Net load_net(const std::string& path, MaterializedNet* points = nullptr);

}  // namespace sigmin::nets
