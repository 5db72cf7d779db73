#include "sigmin/nets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace sigmin::nets {

namespace {

constexpr double kRelSlack = 1e-12;  // closed-test slack for float boundaries

struct KeyHash {
  std::size_t operator()(const std::vector<long long>& k) const {
    std::uint64_t h = 0x243f6a8885a308d3ull;
    for (long long v : k) h = mix64(h ^ static_cast<std::uint64_t>(v));
    return static_cast<std::size_t>(h);
  }
};

using CellSet = std::unordered_set<std::vector<long long>, KeyHash>;

double ball_volume(std::size_t n, double r) {
  if (r <= 0.0) return 0.0;
  const double nd = static_cast<double>(n);
  return std::exp(0.5 * nd * std::log(std::acos(-1.0)) + nd * std::log(r) -
                  std::lgamma(0.5 * nd + 1.0));
}

// squared distance from point p to the interval [lo, hi]
double axis_clamp_sq(double p, double lo, double hi) {
  const double d = p < lo ? lo - p : (p > hi ? p - hi : 0.0);
  return d * d;
}

}  // namespace

// ---------- cube cover of a ball ----------

CubeCover ball_cube_cover(const Vector& center, double eps, double gamma,
                          std::size_t cell_guard) {
  const std::size_t n = center.size();
  if (n == 0) throw std::invalid_argument("ball_cube_cover: empty center");
  if (!(eps > 0.0)) throw std::invalid_argument("ball_cube_cover: eps <= 0");
  const double root_n = std::sqrt(static_cast<double>(n));
  if (!(gamma > 0.0) || gamma > root_n * (1.0 + kRelSlack))
    throw std::invalid_argument("ball_cube_cover: gamma outside (0, sqrt(n)]");

  CubeCover cover;
  cover.n = n;
  cover.center = center;
  cover.radius = eps;
  cover.spacing = 2.0 * eps * gamma / root_n;
  cover.half_side = 0.5 * cover.spacing;

  // quick refusal on a volume-based projection before enumerating
  const double projected =
      ball_volume(n, eps) / std::pow(cover.spacing, static_cast<double>(n));
  if (projected * 0.5 > static_cast<double>(cell_guard)) {
    std::ostringstream msg;
    msg << "ball_cube_cover: projected cell count ~" << std::scientific
        << std::setprecision(2) << projected << " exceeds guard " << cell_guard
        << " (shrink n or grow gamma)";
    throw std::length_error(msg.str());
  }

  const double s = cover.spacing;
  const double h = cover.half_side;
  const double limit_sq = eps * eps * (1.0 + kRelSlack);
  std::vector<long long> lo(n), hi(n), k(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = static_cast<long long>(std::ceil((center[i] - eps - h) / s - kRelSlack));
    hi[i] = static_cast<long long>(std::floor((center[i] + eps + h) / s + kRelSlack));
  }

  std::function<void(std::size_t, double)> dfs = [&](std::size_t i,
                                                     double partial) {
    if (i == n) {
      if (cover.cells.size() >= cell_guard)
        throw std::length_error("ball_cube_cover: cell count exceeds guard");
      cover.cells.push_back(k);
      return;
    }
    for (long long t = lo[i]; t <= hi[i]; ++t) {
      const double c = s * static_cast<double>(t);
      const double add = axis_clamp_sq(center[i], c - h, c + h);
      if (partial + add <= limit_sq) {
        k[i] = t;
        dfs(i + 1, partial + add);
      }
    }
  };
  dfs(0, 0.0);
  return cover;
}

CoverCheck verify_cube_cover(const CubeCover& cover, std::size_t samples,
                             std::uint64_t seed) {
  CellSet cells(cover.cells.begin(), cover.cells.end());
  CoverCheck check;
  check.samples = samples;
  Rng rng(derive(seed, 0x63756265ull));
  std::vector<long long> key(cover.n);
  for (std::size_t t = 0; t < samples; ++t) {
    Vector y = unit_ball(rng, cover.n);
    for (std::size_t i = 0; i < cover.n; ++i)
      y[i] = cover.center[i] + cover.radius * y[i];
    // the tiling cell whose center is nearest always contains y
    for (std::size_t i = 0; i < cover.n; ++i)
      key[i] = std::llround(y[i] / cover.spacing);
    if (cells.find(key) != cells.end()) continue;
    ++check.misses;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cell : cover.cells) {
      double d = 0.0;
      for (std::size_t i = 0; i < cover.n; ++i) {
        const double c = cover.spacing * static_cast<double>(cell[i]);
        d += axis_clamp_sq(y[i], c - cover.half_side, c + cover.half_side);
      }
      best = std::min(best, d);
    }
    check.max_miss_distance =
        std::max(check.max_miss_distance,
                 cover.cells.empty() ? norm(y) : std::sqrt(best));
  }
  return check;
}

double cube_cover_constant(const CubeCover& cover, double gamma) {
  return gamma * std::pow(static_cast<double>(cover.count()),
                          1.0 / static_cast<double>(cover.n));
}

double cube_cover_subexp_constant(const CubeCover& cover, double gamma) {
  const double expo = static_cast<double>(cover.n) / (gamma * gamma);
  return std::pow(static_cast<double>(cover.count()), 1.0 / expo) / gamma;
}

// ---------- integer-cell cover of x + sqrt(n) B_2^n ----------

IntegerCellCover integer_cell_cover(const Vector& x, std::size_t cell_guard) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("integer_cell_cover: empty center");
  IntegerCellCover cover;
  cover.center = x;
  const double r = std::sqrt(static_cast<double>(n));
  const double limit_sq = static_cast<double>(n) * (1.0 + kRelSlack);

  const double projected = ball_volume(n, r + r) /  // crude upper envelope
                           std::pow(2.0, static_cast<double>(n));
  if (projected * 0.5 > static_cast<double>(cell_guard)) {
    std::ostringstream msg;
    msg << "integer_cell_cover: projected cell count ~" << std::scientific
        << std::setprecision(2) << projected << " exceeds guard " << cell_guard;
    throw std::length_error(msg.str());
  }

  std::vector<long long> lo(n), hi(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = static_cast<long long>(std::ceil(x[i] - 1.0 - r - kRelSlack));
    hi[i] = static_cast<long long>(std::floor(x[i] + 1.0 + r + kRelSlack));
  }
  std::function<void(std::size_t, double)> dfs = [&](std::size_t i,
                                                     double partial) {
    if (i == n) {
      if (cover.cells.size() >= cell_guard)
        throw std::length_error("integer_cell_cover: cell count exceeds guard");
      cover.cells.push_back(w);
      return;
    }
    for (long long t = lo[i]; t <= hi[i]; ++t) {
      const double c = static_cast<double>(t);
      const double add = axis_clamp_sq(x[i], c - 1.0, c + 1.0);
      if (partial + add <= limit_sq) {
        w[i] = t;
        dfs(i + 1, partial + add);
      }
    }
  };
  dfs(0, 0.0);
  return cover;
}

CoverCheck verify_integer_cell_cover(const IntegerCellCover& cover,
                                     std::size_t samples, std::uint64_t seed) {
  const std::size_t n = cover.center.size();
  CellSet cells(cover.cells.begin(), cover.cells.end());
  CoverCheck check;
  check.samples = samples;
  Rng rng(derive(seed, 0x696e7463ull));
  const double r = std::sqrt(static_cast<double>(n));
  std::vector<long long> key(n);
  for (std::size_t t = 0; t < samples; ++t) {
    Vector y = unit_ball(rng, n);
    for (std::size_t i = 0; i < n; ++i) y[i] = cover.center[i] + r * y[i];
    for (std::size_t i = 0; i < n; ++i) key[i] = std::llround(y[i]);
    if (cells.find(key) != cells.end()) continue;
    ++check.misses;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cell : cover.cells) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double c = static_cast<double>(cell[i]);
        d += axis_clamp_sq(y[i], c - 1.0, c + 1.0);
      }
      best = std::min(best, d);
    }
    check.max_miss_distance = std::max(
        check.max_miss_distance, cover.cells.empty() ? norm(y) : std::sqrt(best));
  }
  return check;
}

double integer_cell_cover_constant(const IntegerCellCover& cover) {
  return std::pow(static_cast<double>(cover.count()),
                  1.0 / static_cast<double>(cover.center.size()));
}

// ---------- parallelepiped cover of the centered unit cube ----------

ParallelepipedCover unit_cube_parallelepiped_cover(const Vector& alpha,
                                                   double kappa) {
  const std::size_t n = alpha.size();
  if (n == 0)
    throw std::invalid_argument("parallelepiped cover: empty half-sides");
  for (double a : alpha)
    if (!(a > 0.0) || a > 1.0 + kRelSlack)
      throw std::invalid_argument(
          "parallelepiped cover: half-sides must lie in (0, 1]");
  if (kappa > 0.0) {
    double log_prod = 0.0;
    for (double a : alpha) log_prod += std::log(std::min(a, 1.0));
    const double target = -static_cast<double>(n) * std::log(kappa);
    if (log_prod < target - 1e-9)
      throw std::domain_error(
          "parallelepiped cover: half-sides infeasible for the given kappa");
  }

  ParallelepipedCover cover;
  cover.half_sides = alpha;
  cover.counts.resize(n);
  cover.start.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::min(alpha[i], 1.0);
    // floor(1/a) boxes of width 2a cover a unit segment for every a in (0,1]
    const std::size_t m = static_cast<std::size_t>(
        std::max(1.0, std::floor(1.0 / a + 1e-9)));
    cover.counts[i] = m;
    const double overhang = static_cast<double>(m) * 2.0 * a - 1.0;
    cover.start[i] = -0.5 - 0.5 * overhang + a;
  }
  return cover;
}

CoverCheck verify_parallelepiped_cover(const ParallelepipedCover& cover,
                                       std::size_t samples,
                                       std::uint64_t seed) {
  const std::size_t n = cover.half_sides.size();
  CoverCheck check;
  check.samples = samples;
  Rng rng(derive(seed, 0x70617261ull));
  for (std::size_t t = 0; t < samples; ++t) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = rng.unit() - 0.5;
      const double a = cover.half_sides[i];
      const double m = static_cast<double>(cover.counts[i]);
      double idx = std::floor((y - cover.start[i]) / (2.0 * a) + 0.5);
      idx = std::min(std::max(idx, 0.0), m - 1.0);
      const double c = cover.start[i] + 2.0 * a * idx;
      const double excess = std::abs(y - c) - a * (1.0 + kRelSlack);
      worst = std::max(worst, excess);
    }
    if (worst > 0.0) {
      ++check.misses;
      check.max_miss_distance = std::max(check.max_miss_distance, worst);
    }
  }
  return check;
}

// ---------- sphere covers and samples ----------

std::vector<Vector> sphere_sample(std::size_t n, std::size_t count,
                                  std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sphere_sample: n == 0");
  Rng rng(derive(seed, 0x73706872ull));
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t t = 0; t < count; ++t) out.push_back(unit_sphere(rng, n));
  return out;
}

SphereCover sphere_cover(std::size_t n, double eps, std::uint64_t seed,
                         std::size_t pool_budget, std::size_t cert_batch) {
  if (n == 0) throw std::invalid_argument("sphere_cover: n == 0");
  if (!(eps > 0.0) || eps >= 1.0)
    throw std::invalid_argument("sphere_cover: eps outside (0, 1)");
  SphereCover cover;
  cover.n = n;
  cover.eps = eps;
  if (n == 1) {
    cover.centers = {Vector{1.0}, Vector{-1.0}};
    return cover;
  }

  std::size_t budget = pool_budget;
  if (budget == 0) {
    const double heuristic =
        50.0 * std::pow(2.5 / eps, static_cast<double>(n - 1));
    if (heuristic > 500000.0) {
      std::ostringstream msg;
      msg << "sphere_cover: pool heuristic ~" << std::scientific
          << std::setprecision(2) << heuristic
          << " points exceeds 5e5 (pass an explicit budget or use "
             "sphere_sample)";
      throw std::length_error(msg.str());
    }
    budget = static_cast<std::size_t>(std::max(2000.0, heuristic));
  }

  std::vector<Vector> pool = sphere_sample(n, budget, derive(seed, 1));
  std::vector<double> dist_sq(pool.size(),
                              std::numeric_limits<double>::infinity());
  const double eps_sq = eps * eps;

  // farthest-point greedy: add the worst-covered pool point until the pool
  // is covered at radius eps; successive centers are > eps apart
  std::size_t next = 0;
  while (true) {
    cover.centers.push_back(pool[next]);
    const Vector& c = cover.centers.back();
    double worst = 0.0;
    std::size_t worst_at = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double diff = pool[i][j] - c[j];
        d += diff * diff;
      }
      if (d < dist_sq[i]) dist_sq[i] = d;
      if (dist_sq[i] > worst) {
        worst = dist_sq[i];
        worst_at = i;
      }
    }
    if (worst <= eps_sq) {
      cover.sample_radius = std::sqrt(worst);
      break;
    }
    next = worst_at;
  }

  // fresh-sample certification at 2*eps
  std::vector<Vector> fresh = sphere_sample(n, cert_batch, derive(seed, 2));
  double worst = 0.0;
  for (const Vector& y : fresh) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& c : cover.centers) {
      double d = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double diff = y[j] - c[j];
        d += diff * diff;
      }
      best = std::min(best, d);
    }
    worst = std::max(worst, best);
  }
  cover.certified_radius = std::sqrt(worst);
  if (cover.certified_radius > 2.0 * eps * (1.0 + kRelSlack)) {
    std::ostringstream msg;
    msg << "sphere_cover: certification failed, achieved radius "
        << cover.certified_radius << " > " << 2.0 * eps
        << " (grow the pool budget)";
    throw std::runtime_error(msg.str());
  }
  return cover;
}

CoverCheck verify_sphere_cover(const SphereCover& cover, std::size_t samples,
                               std::uint64_t seed) {
  CoverCheck check;
  check.samples = samples;
  Rng rng(derive(seed, 0x76737063ull));
  const double limit = 2.0 * cover.eps * (1.0 + kRelSlack);
  for (std::size_t t = 0; t < samples; ++t) {
    const Vector y = unit_sphere(rng, cover.n);
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& c : cover.centers) {
      double d = 0.0;
      for (std::size_t j = 0; j < cover.n; ++j) {
        const double diff = y[j] - c[j];
        d += diff * diff;
      }
      best = std::min(best, d);
    }
    const double dist = std::sqrt(best);
    if (dist > limit) {
      ++check.misses;
      check.max_miss_distance = std::max(check.max_miss_distance, dist);
    }
  }
  return check;
}

// ---------- dominating weight family ----------

double weight_to_ball_coord(double alpha, double kappa, std::size_t n) {
  if (!(alpha > 0.0) || alpha > 1.0 + kRelSlack)
    throw std::invalid_argument("weight_to_ball_coord: alpha outside (0,1]");
  if (!(kappa > 1.0))
    throw std::invalid_argument("weight_to_ball_coord: kappa must exceed 1");
  const double num = std::log(1.0 / std::min(alpha, 1.0));
  return std::sqrt(std::max(0.0, num) /
                   (static_cast<double>(n) * std::log(kappa)));
}

double ball_coord_to_weight(double v, double kappa, std::size_t n) {
  if (v < 0.0) throw std::invalid_argument("ball_coord_to_weight: v < 0");
  if (!(kappa > 1.0))
    throw std::invalid_argument("ball_coord_to_weight: kappa must exceed 1");
  return std::exp(-static_cast<double>(n) * v * v * std::log(kappa));
}

WeightFamily dominating_weight_family(std::size_t n, double kappa, double mu) {
  if (n == 0) throw std::invalid_argument("weight family: n == 0");
  if (!(kappa >= 1.0)) throw std::invalid_argument("weight family: kappa < 1");
  WeightFamily family;
  family.n = n;
  family.kappa = kappa;
  family.mu = mu;
  if (kappa == 1.0) {
    // Omega_1 = {alpha == 1}: the single all-ones member dominates it
    family.mu = 0.0;
    family.betas.push_back(Vector(n, 1.0));
    family.kappa_eff.push_back(1.0);
    return family;
  }
  if (!(mu > 0.0)) throw std::invalid_argument("weight family: mu <= 0");

  const double h = mu / std::sqrt(static_cast<double>(n));
  const double s = 2.0 * h;
  // cells spacing*k + [-h, h]^n with k >= 0 that intersect the orthant ball
  const long long k_max =
      static_cast<long long>(std::floor((1.0 + h) / s + kRelSlack));

  std::vector<long long> k(n);
  std::set<Vector> seen;
  std::function<void(std::size_t, double)> dfs = [&](std::size_t i,
                                                     double partial) {
    if (i == n) {
      // clamped dominating corner of cellextent [lo_i, hi_i] intersected
      // with the ball: v_i = min(hi_i, sqrt(1 - sum_{j != i} max(lo_j,0)^2)).
      // It dominates every ball point of the cell coordinatewise and is the
      // smallest vector that does.
      Vector v(n);
      double norm_v_sq = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double lo = s * static_cast<double>(k[j]) - h;
        const double hi = s * static_cast<double>(k[j]) + h;
        const double lo_pos = std::max(lo, 0.0);
        const double others = partial - lo_pos * lo_pos;
        const double cap = std::sqrt(std::max(0.0, 1.0 - others));
        v[j] = std::min(hi, cap);
        norm_v_sq += v[j] * v[j];
      }
      if (!seen.insert(v).second) return;
      Vector beta(n);
      for (std::size_t j = 0; j < n; ++j)
        beta[j] = ball_coord_to_weight(v[j], kappa, n);
      family.betas.push_back(std::move(beta));
      family.kappa_eff.push_back(std::pow(kappa, norm_v_sq));
      return;
    }
    for (long long t = 0; t <= k_max; ++t) {
      const double lo = s * static_cast<double>(t) - h;
      const double lo_pos = std::max(lo, 0.0);
      const double add = lo_pos * lo_pos;
      if (partial + add <= 1.0 + kRelSlack) {
        k[i] = t;
        dfs(i + 1, partial + add);
      }
    }
  };
  dfs(0, 0.0);
  return family;
}

std::size_t best_member(const WeightFamily& family,
                        const Vector& col_norms_sq) {
  if (family.betas.empty())
    throw std::invalid_argument("best_member: empty family");
  if (col_norms_sq.size() != family.n)
    throw std::invalid_argument("best_member: dimension mismatch");
  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < family.betas.size(); ++b) {
    double val = 0.0;
    for (std::size_t i = 0; i < family.n; ++i)
      val += family.betas[b][i] * family.betas[b][i] * col_norms_sq[i];
    if (val < best_val) {
      best_val = val;
      best = b;
    }
  }
  return best;
}

double weight_family_constant(const WeightFamily& family) {
  return family.mu * std::pow(static_cast<double>(family.size()),
                              1.0 / static_cast<double>(family.n));
}

// ---------- the main net ----------

Net build_main_net(std::vector<Vector> centers, const NetParams& params) {
  if (params.n == 0) throw std::invalid_argument("build_main_net: n == 0");
  if (centers.empty())
    throw std::invalid_argument("build_main_net: no covering centers");
  for (const Vector& c : centers)
    if (c.size() != params.n)
      throw std::invalid_argument("build_main_net: center dimension mismatch");
  if (!(params.gamma > 1.0))
    throw std::invalid_argument("build_main_net: gamma must exceed 1");
  if (!(params.eps > 0.0) ||
      params.eps * params.gamma > 0.1 * (1.0 + 1e-9))
    throw std::invalid_argument(
        "build_main_net: need eps > 0 with eps*gamma <= 1/10");
  if (!(params.kappa >= 1.0))
    throw std::invalid_argument("build_main_net: kappa < 1");

  Net net;
  net.params = params;
  net.centers = std::move(centers);
  net.sparse_support_cap =
      static_cast<double>(params.n) / std::pow(params.gamma, 0.08);
  net.sparse_ball_radius = 3.0 * params.gamma * params.eps;

  if (params.kappa == 1.0) {
    // degenerate family {alpha == 1}; full reachable-vertex construction
    net.mu = 0.0;
    net.family.n = params.n;
    net.family.kappa = 1.0;
    net.family.mu = 0.0;
    net.family.betas.push_back(Vector(params.n, 1.0));
    net.family.kappa_eff.push_back(1.0);
    net.net_case = NetCase::kVertex;
    return net;
  }

  const double log_kappa = std::log(params.kappa);
  net.mu = std::min(1.0 / log_kappa, std::pow(params.gamma, 0.09));
  net.family = dominating_weight_family(params.n, params.kappa, net.mu);
  const double threshold = std::log(2.0) / std::pow(params.gamma, 0.09);
  net.net_case =
      log_kappa <= threshold ? NetCase::kSparse : NetCase::kVertex;
  return net;
}

rounding::RoundingParams net_rounding_params(const Net& net, std::size_t j,
                                             std::size_t b) {
  if (j >= net.centers.size() || b >= net.family.size())
    throw std::invalid_argument("net_rounding_params: index out of range");
  rounding::RoundingParams params;
  params.nu = net.params.eps * net.params.gamma;
  params.alpha = net.family.betas[b];
  params.anchor = net.centers[j];
  return params;
}

bool net_contains(const Net& net, const NetPoint& p) {
  if (p.center_index >= net.centers.size() ||
      p.beta_index >= net.family.size() || p.k.size() != net.params.n)
    throw std::invalid_argument("net_contains: bad indices");
  const double root_n = std::sqrt(static_cast<double>(net.params.n));
  const double reach_sq =
      net.params.eps * net.params.eps * (1.0 + kRelSlack);
  const Vector& beta = net.family.betas[p.beta_index];
  double clamp_sq = 0.0;
  double offset_sq = 0.0;
  std::size_t support = 0;
  for (std::size_t i = 0; i < net.params.n; ++i) {
    const double pitch =
        beta[i] * net.params.eps * net.params.gamma / root_n;
    if (pitch == 0.0) {
      if (p.k[i] != 0) return false;
      continue;
    }
    const double a = std::abs(static_cast<double>(p.k[i]));
    if (p.k[i] != 0) ++support;
    const double d = pitch * std::max(0.0, a - 1.0);
    clamp_sq += d * d;
    offset_sq += pitch * a * pitch * a;
    if (clamp_sq > reach_sq) return false;
  }
  if (net.net_case == NetCase::kSparse) {
    if (static_cast<double>(support) > net.sparse_support_cap + kRelSlack)
      return false;
    const double ball = net.sparse_ball_radius;
    if (offset_sq > ball * ball * (1.0 + kRelSlack)) return false;
  }
  return true;
}

Vector net_point_value(const Net& net, const NetPoint& p) {
  if (p.center_index >= net.centers.size() ||
      p.beta_index >= net.family.size() || p.k.size() != net.params.n)
    throw std::invalid_argument("net_point_value: bad indices");
  const double root_n = std::sqrt(static_cast<double>(net.params.n));
  const Vector& beta = net.family.betas[p.beta_index];
  Vector w = net.centers[p.center_index];
  for (std::size_t i = 0; i < net.params.n; ++i) {
    const double pitch =
        beta[i] * net.params.eps * net.params.gamma / root_n;
    w[i] += pitch * static_cast<double>(p.k[i]);
  }
  return w;
}

namespace {

// shared DFS over the lattice patch of (center j, member b); calls emit(k)
// for every point satisfying the membership rule
void patch_dfs(const Net& net, std::size_t b,
               const std::function<void(const std::vector<long long>&)>& emit) {
  const std::size_t n = net.params.n;
  const double eps = net.params.eps;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double reach_sq = eps * eps * (1.0 + kRelSlack);
  const bool sparse = net.net_case == NetCase::kSparse;
  const double ball_sq = net.sparse_ball_radius * net.sparse_ball_radius *
                         (1.0 + kRelSlack);
  const Vector& beta = net.family.betas[b];
  std::vector<double> pitch(n);
  std::vector<long long> k_max(n);
  for (std::size_t i = 0; i < n; ++i) {
    pitch[i] = beta[i] * eps * net.params.gamma / root_n;
    k_max[i] = pitch[i] > 0.0
                   ? static_cast<long long>(
                         std::floor(1.0 + eps / pitch[i] + kRelSlack))
                   : 0;
  }
  std::vector<long long> k(n);
  std::function<void(std::size_t, double, double, std::size_t)> dfs =
      [&](std::size_t i, double clamp_sq, double offset_sq,
          std::size_t support) {
        if (sparse &&
            static_cast<double>(support) > net.sparse_support_cap + kRelSlack)
          return;
        if (i == n) {
          emit(k);
          return;
        }
        for (long long t = -k_max[i]; t <= k_max[i]; ++t) {
          const double a = std::abs(static_cast<double>(t));
          const double d = pitch[i] * std::max(0.0, a - 1.0);
          const double c2 = clamp_sq + d * d;
          if (c2 > reach_sq) continue;
          const double o2 = offset_sq + pitch[i] * a * pitch[i] * a;
          if (sparse && o2 > ball_sq) continue;
          k[i] = t;
          dfs(i + 1, c2, o2, support + (t != 0 ? 1 : 0));
        }
      };
  dfs(0, 0.0, 0.0, 0);
}

}  // namespace

std::size_t count_net_points(const Net& net, std::size_t j, std::size_t b) {
  if (j >= net.centers.size() || b >= net.family.size())
    throw std::invalid_argument("count_net_points: index out of range");
  std::size_t count = 0;
  patch_dfs(net, b, [&](const std::vector<long long>&) { ++count; });
  return count;
}

MaterializedNet materialize(const Net& net) {
  MaterializedNet out;
  for (std::size_t j = 0; j < net.centers.size(); ++j) {
    for (std::size_t b = 0; b < net.family.size(); ++b) {
      patch_dfs(net, b, [&](const std::vector<long long>& k) {
        if (out.points.size() >= net.params.materialize_guard)
          throw std::length_error(
              "materialize: net size exceeds the materialization guard");
        out.points.push_back(NetPoint{j, b, k});
      });
    }
  }
  return out;
}

double net_cardinality_constant(const Net& net, double count_per_center) {
  const double n = static_cast<double>(net.params.n);
  if (net.net_case == NetCase::kSparse) {
    const double expo = n / std::pow(net.params.gamma, 0.08);
    return std::pow(count_per_center, 1.0 / expo) / net.params.gamma;
  }
  if (net.params.kappa == 1.0) return std::pow(count_per_center, 1.0 / n);
  return std::pow(count_per_center, 1.0 / n) /
         (net.params.kappa * std::log(net.params.kappa));
}

WitnessResult find_net_witness(const Net& net, const Matrix& A,
                               const Vector& x, Rng& rng,
                               std::size_t max_draws) {
  if (A.cols() != net.params.n || x.size() != net.params.n)
    throw std::invalid_argument("find_net_witness: dimension mismatch");
  WitnessResult res;

  // first-in-list covering center
  const double reach = net.params.eps * (1.0 + kRelSlack);
  std::size_t j = net.centers.size();
  for (std::size_t c = 0; c < net.centers.size(); ++c) {
    Vector d = x;
    axpy(-1.0, net.centers[c], d);
    if (norm(d) <= reach) {
      j = c;
      break;
    }
  }
  if (j == net.centers.size())
    throw std::invalid_argument(
        "find_net_witness: x is not covered by any net center");

  Vector y(net.params.n);
  for (std::size_t i = 0; i < net.params.n; ++i) y[i] = A.col_norm_sq(i);
  const std::size_t b = best_member(net.family, y);
  const rounding::RoundingParams params = net_rounding_params(net, j, b);
  const double m_bound = rounding::expected_energy_bound(params, y);
  res.bound_2m = 2.0 * m_bound;
  res.center_index = j;
  res.beta_index = b;
  res.achieved = std::numeric_limits<double>::infinity();

  for (std::size_t d = 1; d <= max_draws; ++d) {
    const rounding::RoundedPoint rp = rounding::random_round(x, params, rng);
    NetPoint p{j, b, rp.k};
    const bool member = net_contains(net, p);
    if (!member) {
      ++res.rejected_membership;
      continue;
    }
    Vector diff = x;
    axpy(-1.0, rp.eta, diff);
    const Vector img = A.apply(diff);
    const double f = norm_sq(img);
    res.achieved = std::min(res.achieved, f);
    if (f <= res.bound_2m * (1.0 + kRelSlack)) {
      res.found = true;
      res.draws_used = d;
      res.achieved = f;
      res.point = std::move(p);
      res.y = rp.eta;
      return res;
    }
  }
  res.draws_used = max_draws;
  return res;
}

// ---------- net file format (text, version 1) ----------

namespace {

void expect_token(std::istream& in, const char* want) {
  std::string got;
  if (!(in >> got) || got != want)
    throw std::runtime_error(std::string("net file: expected '") + want +
                             "', got '" + got + "'");
}

// Lines starting with '#' directly after the version header carry free-form
// metadata (e.g. the cardinality ledger) and are ignored on load.
void skip_comment_lines(std::istream& in) {
  in >> std::ws;
  while (in.peek() == '#') {
    std::string line;
    std::getline(in, line);
    in >> std::ws;
  }
}

}  // namespace

void save_net(const Net& net, const std::string& path,
              const MaterializedNet* points,
              const std::vector<std::string>* comments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_net: cannot open " + path);
  out << std::setprecision(17);
  out << "sigmin-net v1\n";
  if (comments != nullptr)
    for (const std::string& line : *comments) out << "# " << line << "\n";
  out << "case " << net.case_name() << "\n";
  out << "n " << net.params.n << "\n";
  out << "eps " << net.params.eps << "\n";
  out << "gamma " << net.params.gamma << "\n";
  out << "kappa " << net.params.kappa << "\n";
  out << "mu " << net.mu << "\n";
  out << "sparse_cap " << net.sparse_support_cap << "\n";
  out << "sparse_radius " << net.sparse_ball_radius << "\n";
  out << "guard " << net.params.materialize_guard << "\n";
  out << "centers " << net.centers.size() << "\n";
  for (const Vector& c : net.centers) {
    for (std::size_t i = 0; i < c.size(); ++i)
      out << (i ? " " : "") << c[i];
    out << "\n";
  }
  out << "betas " << net.family.size() << "\n";
  for (std::size_t b = 0; b < net.family.size(); ++b) {
    out << net.family.kappa_eff[b];
    for (double v : net.family.betas[b]) out << " " << v;
    out << "\n";
  }
  if (points == nullptr) {
    out << "mode generator\n";
  } else {
    out << "mode points\n";
    out << "points " << points->points.size() << "\n";
    for (const NetPoint& p : points->points) {
      out << p.center_index << " " << p.beta_index;
      for (long long v : p.k) out << " " << v;
      out << "\n";
    }
  }
  if (!out) throw std::runtime_error("save_net: write failed for " + path);
}

Net load_net(const std::string& path, MaterializedNet* points) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_net: cannot open " + path);
  expect_token(in, "sigmin-net");
  expect_token(in, "v1");
  skip_comment_lines(in);
  Net net;
  std::string word;
  expect_token(in, "case");
  in >> word;
  if (word == "sparse")
    net.net_case = NetCase::kSparse;
  else if (word == "vertex")
    net.net_case = NetCase::kVertex;
  else
    throw std::runtime_error("load_net: unknown case tag '" + word + "'");
  expect_token(in, "n");
  in >> net.params.n;
  expect_token(in, "eps");
  in >> net.params.eps;
  expect_token(in, "gamma");
  in >> net.params.gamma;
  expect_token(in, "kappa");
  in >> net.params.kappa;
  expect_token(in, "mu");
  in >> net.mu;
  expect_token(in, "sparse_cap");
  in >> net.sparse_support_cap;
  expect_token(in, "sparse_radius");
  in >> net.sparse_ball_radius;
  expect_token(in, "guard");
  in >> net.params.materialize_guard;
  expect_token(in, "centers");
  std::size_t m = 0;
  in >> m;
  net.centers.assign(m, Vector(net.params.n));
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t i = 0; i < net.params.n; ++i) in >> net.centers[c][i];
  expect_token(in, "betas");
  std::size_t nb = 0;
  in >> nb;
  net.family.n = net.params.n;
  net.family.kappa = net.params.kappa;
  net.family.mu = net.mu;
  net.family.betas.assign(nb, Vector(net.params.n));
  net.family.kappa_eff.assign(nb, 1.0);
  for (std::size_t b = 0; b < nb; ++b) {
    in >> net.family.kappa_eff[b];
    for (std::size_t i = 0; i < net.params.n; ++i) in >> net.family.betas[b][i];
  }
  expect_token(in, "mode");
  in >> word;
  if (word == "points") {
    expect_token(in, "points");
    std::size_t np = 0;
    in >> np;
    if (points != nullptr) points->points.reserve(np);
    for (std::size_t p = 0; p < np; ++p) {
      NetPoint pt;
      in >> pt.center_index >> pt.beta_index;
      pt.k.resize(net.params.n);
      for (std::size_t i = 0; i < net.params.n; ++i) in >> pt.k[i];
      if (points != nullptr) points->points.push_back(std::move(pt));
    }
  } else if (word != "generator") {
    throw std::runtime_error("load_net: unknown mode '" + word + "'");
  }
  if (!in)
    throw std::runtime_error("load_net: truncated or malformed file " + path);
  return net;
}

}  // namespace sigmin::nets
