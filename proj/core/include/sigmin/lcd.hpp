#pragma once

// Certified essential least common denominator of a vector:
//
//   lcd(a; alpha, c) = inf{ theta > 0 :
//                           dist(theta a, Z^m) < min(c theta |a|, alpha) }.
//
// The gap function
//   g(theta) = dist(theta a, Z^m) - min(c theta |a|, alpha)
// is Lipschitz with constant (1+c)|a|, so branch-and-bound over (0, cap]
// certifies: an interval with midpoint value g(m) >= (1+c)|a| * halfwidth
// contains no feasible theta and is excluded; surviving intervals are
// bisected, in ascending order, until a feasible point is found within tol
// of the certified-infeasible prefix. The strict inequality is tested with
// a 1e-12 slack toward feasibility (the boundary is measure zero).
//
// Results are certified:
//   * Found[lo, hi]: hi is feasible (within the slack), every theta <= lo is
//     infeasible, and hi - lo <= tol.
//   * ExceedsCap: every theta <= cap is infeasible.
//
// For a = e_1 the value is max(1/(1+c), 1-alpha): below 1/2 the distance
// dist(theta, Z) = theta always beats c*theta and alpha cannot rescue it;
// on (1/2, 1] feasibility 1-theta < min(c theta, alpha) solves to
// theta > max(1/(1+c), 1-alpha).
//
// Scale covariance: lcd(a/t) = t * lcd(a) with the same (alpha, c).
//
// The subspace variant (inf over unit vectors of a span) is provided only
// as a sampling heuristic and is labeled as such in its result type.

#include <cstdint>
#include <vector>

#include "sigmin/matrix.hpp"

namespace sigmin::lcd {

// euclidean distance from theta*a to the nearest integer point
double lcd_dist(double theta, const Vector& a);

// g(theta) = dist(theta a, Z^m) - min(c theta |a|, alpha); |a| passed in
// so sweeps don't recompute it
double lcd_gap(double theta, const Vector& a, double norm_a, double alpha,
               double c);

struct LcdQuery {
  Vector a;
  double alpha = 0.0;
  double c = 0.0;
  double cap = 0.0;  // 0 -> auto: 1e9 / |a|
  double tol = 1e-9;
  bool record_trace = false;
};

struct LcdEval {
  double theta = 0.0;
  double gap = 0.0;
};

enum class LcdStatus { kFound, kExceedsCap };

struct LcdResult {
  LcdStatus status = LcdStatus::kExceedsCap;
  double lo = 0.0;  // certified: no feasible theta <= lo
  double hi = 0.0;  // feasible (within slack) when status == kFound
  std::size_t evaluations = 0;
  std::size_t exclusions = 0;
  std::vector<LcdEval> trace;  // filled only when query.record_trace

  double value() const { return hi; }  // representative feasible theta
};

// pre: |a| > 0, alpha > 0, c in (0,1), tol > 0, cap * |a| <= 1e9
LcdResult lcd_vector(const LcdQuery& query);

// analytic value for a = e_1
double lcd_e1_value(double alpha, double c);

// sampling heuristic for the subspace LCD: minimizes lcd_vector over random
// unit vectors of span(basis). Not certified.
struct SubspaceLcdEstimate {
  double value = 0.0;        // smallest Found value seen (inf if none found)
  std::size_t found = 0;     // samples with a Found result
  std::size_t samples = 0;
  bool heuristic = true;     // always: this is not a certified bound
};

SubspaceLcdEstimate subspace_lcd_heuristic(const std::vector<Vector>& basis,
                                           double alpha, double c, double cap,
                                           double tol, std::size_t samples,
                                           std::uint64_t seed);

}  // namespace sigmin::lcd
