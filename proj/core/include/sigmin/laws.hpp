#pragma once

// Entry distributions for random matrix ensembles.
//
// Each law knows how to sample itself from a deterministic stream, and
// carries the analytic facts the harness needs: second moment (possibly
// infinite), mean, and a documented concentration-function certificate
// (a, b) meaning  sup_z P(|X - z| < a) <= b < 1  when one exists.
//
// Laws provided:
//   bernoulli        fair signs +-1
//   gaussian(m, s)   normal with mean m, standard deviation s
//   cusp_tail        symmetric density with an integrable 1/sqrt cusp at 0,
//                    a uniform bulk on [-1, 1], and a 1/(2 n s^3) tail;
//                    scale coupled to the matrix dimension n (n >= 3).
//                    Mean 0, E X^2 = infinite, E|column| <= 3 sqrt(n).
//   point_mass(v)    deterministic value v (degenerate; used to probe
//                    refusal paths -- its concentration function is NOT
//                    bounded away from 1)
//   scaled(law, f)   f * X with X from an inner law
//   heavy_mix        nonnegative sqrt((1 - 1/n) Y^2 + Z^2 / n) with Y = +-1
//                    and |Z| = 1/(2 sqrt(U)) Pareto-type: E|Z| = 1,
//                    E Z^2 = infinite. Finite first, infinite second moment.
//
// The dimension-coupled laws (cusp_tail, heavy_mix) must be resolved with
// the matrix dimension n before sampling; see resolved_with().

#include <cstdint>
#include <memory>
#include <string>

#include "sigmin/rng.hpp"

namespace sigmin::ensembles {

enum class LawKind {
  kBernoulli,
  kGaussian,
  kCuspTail,
  kPointMass,
  kScaled,
  kHeavyMix,
};

struct ConcentrationCertificate {
  double a = 0.0;      // interval radius
  double b = 1.0;      // mass bound, must be < 1 to count as bounded
  bool bounded = false;
};

class EntryLaw {
 public:
  static EntryLaw bernoulli();
  static EntryLaw gaussian(double mean, double sd);
  static EntryLaw cusp_tail(std::size_t n = 0);
  static EntryLaw point_mass(double value);
  static EntryLaw scaled(EntryLaw inner, double factor);
  static EntryLaw heavy_mix(std::size_t n = 0);

  LawKind kind() const { return kind_; }

  // Returns a copy with any dimension-coupled parameters bound to n.
  // Laws that do not depend on the dimension are returned unchanged.
  EntryLaw resolved_with(std::size_t n) const;
  bool needs_dimension() const;
  std::size_t dimension() const { return dim_; }

  double sample(Rng& rng) const;

  double mean() const;
  // E X^2; +infinity for the heavy-tailed laws
  double mean_sq() const;
  bool has_finite_second_moment() const;

  ConcentrationCertificate concentration() const;

  // config-grammar spelling, e.g. "gaussian(0,1)" or "scaled(bernoulli,2)"
  std::string to_string() const;

  // parameters (meaning depends on kind)
  double param1() const { return p1_; }
  double param2() const { return p2_; }
  const EntryLaw* inner() const { return inner_.get(); }

 private:
  LawKind kind_ = LawKind::kBernoulli;
  double p1_ = 0.0;  // gaussian mean / point mass value / scale factor
  double p2_ = 0.0;  // gaussian sd
  std::size_t dim_ = 0;
  std::shared_ptr<const EntryLaw> inner_;
};

// Parse the config-grammar law spelling. Grammar (whitespace ignored):
//   law := "bernoulli" | "gaussian(" num "," num ")" | "cusp_tail"
//        | "point_mass(" num ")" | "scaled(" law "," num ")" | "heavy_mix"
// Throws std::invalid_argument on malformed input.
EntryLaw parse_law(const std::string& text);

}  // namespace sigmin::ensembles
