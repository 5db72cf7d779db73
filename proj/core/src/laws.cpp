#include "sigmin/laws.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sigmin::ensembles {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// cusp_tail density (symmetric in s, dimension parameter n >= 3):
//   1/(2 sqrt(|s|))                 on  |s| <= 1/n^2      (mass 2/n)
//   (1 - 5/(2n)) / (2 (1 - 1/n^2))  on  1/n^2 < |s| <= 1  (mass 1 - 5/(2n))
//   1/(2 n |s|^3)                   on  |s| > 1           (mass 1/(2n))
// The bulk height is fixed by total mass 1. The magnitude CDF is
//   F(x) = 2 sqrt(x)                     x in [0, 1/n^2]
//   F(x) = 2/n + h (x - 1/n^2)           x in [1/n^2, 1],  h = (1-5/(2n))/(1-1/n^2)
//   F(x) = 1 - 1/(2 n x^2)               x >= 1
// inverted below; the sign is an independent fair coin.
double sample_cusp_tail_magnitude(Rng& rng, double n) {
  const double u = rng.unit();
  const double inner_mass = 2.0 / n;
  const double tail_start = 1.0 - 1.0 / (2.0 * n);
  if (u < inner_mass) {
    return 0.25 * u * u;
  }
  if (u < tail_start) {
    const double h = (1.0 - 2.5 / n) / (1.0 - 1.0 / (n * n));
    return 1.0 / (n * n) + (u - inner_mass) / h;
  }
  // u in [1 - 1/(2n), 1): x = 1 / sqrt(2 n (1 - u)), finite since u < 1
  return 1.0 / std::sqrt(2.0 * n * (1.0 - u));
}
}  // namespace

EntryLaw EntryLaw::bernoulli() {
  EntryLaw law;
  law.kind_ = LawKind::kBernoulli;
  return law;
}

EntryLaw EntryLaw::gaussian(double mean, double sd) {
  EntryLaw law;
  law.kind_ = LawKind::kGaussian;
  law.p1_ = mean;
  law.p2_ = sd;
  return law;
}

EntryLaw EntryLaw::cusp_tail(std::size_t n) {
  if (n != 0 && n < 3)
    throw std::invalid_argument("cusp_tail requires dimension n >= 3");
  EntryLaw law;
  law.kind_ = LawKind::kCuspTail;
  law.dim_ = n;
  return law;
}

EntryLaw EntryLaw::point_mass(double value) {
  EntryLaw law;
  law.kind_ = LawKind::kPointMass;
  law.p1_ = value;
  return law;
}

EntryLaw EntryLaw::scaled(EntryLaw inner, double factor) {
  EntryLaw law;
  law.kind_ = LawKind::kScaled;
  law.p1_ = factor;
  law.inner_ = std::make_shared<const EntryLaw>(std::move(inner));
  return law;
}

EntryLaw EntryLaw::heavy_mix(std::size_t n) {
  if (n != 0 && n < 2)
    throw std::invalid_argument("heavy_mix requires dimension n >= 2");
  EntryLaw law;
  law.kind_ = LawKind::kHeavyMix;
  law.dim_ = n;
  return law;
}

bool EntryLaw::needs_dimension() const {
  switch (kind_) {
    case LawKind::kCuspTail:
    case LawKind::kHeavyMix:
      return dim_ == 0;
    case LawKind::kScaled:
      return inner_->needs_dimension();
    default:
      return false;
  }
}

EntryLaw EntryLaw::resolved_with(std::size_t n) const {
  EntryLaw law = *this;
  switch (kind_) {
    case LawKind::kCuspTail:
      if (law.dim_ == 0) law = cusp_tail(n);
      break;
    case LawKind::kHeavyMix:
      if (law.dim_ == 0) law = heavy_mix(n);
      break;
    case LawKind::kScaled:
      law.inner_ =
          std::make_shared<const EntryLaw>(inner_->resolved_with(n));
      break;
    default:
      break;
  }
  return law;
}

double EntryLaw::sample(Rng& rng) const {
  switch (kind_) {
    case LawKind::kBernoulli:
      return rng.coin() ? 1.0 : -1.0;
    case LawKind::kGaussian:
      return rng.gaussian(p1_, p2_);
    case LawKind::kCuspTail: {
      if (dim_ == 0)
        throw std::logic_error("cusp_tail sampled without a bound dimension");
      const double mag =
          sample_cusp_tail_magnitude(rng, static_cast<double>(dim_));
      return rng.coin() ? mag : -mag;
    }
    case LawKind::kPointMass:
      return p1_;
    case LawKind::kScaled:
      return p1_ * inner_->sample(rng);
    case LawKind::kHeavyMix: {
      if (dim_ == 0)
        throw std::logic_error("heavy_mix sampled without a bound dimension");
      const double n = static_cast<double>(dim_);
      const double y = rng.coin() ? 1.0 : -1.0;  // Y = +-1
      const double z = 0.5 / std::sqrt(rng.unit_oo());  // |Z|, Pareto-type
      return std::sqrt((1.0 - 1.0 / n) * y * y + z * z / n);
    }
  }
  return 0.0;
}

double EntryLaw::mean() const {
  switch (kind_) {
    case LawKind::kBernoulli:
      return 0.0;
    case LawKind::kGaussian:
      return p1_;
    case LawKind::kCuspTail:
      return 0.0;  // symmetric
    case LawKind::kPointMass:
      return p1_;
    case LawKind::kScaled:
      return p1_ * inner_->mean();
    case LawKind::kHeavyMix:
      // E X in [sqrt(1 - 1/n), sqrt(1 - 1/n) + E|Z|/sqrt(n)]; no closed form
      // needed anywhere, report the lower end's order only via mean_sq = inf
      return std::numeric_limits<double>::quiet_NaN();
  }
  return 0.0;
}

double EntryLaw::mean_sq() const {
  switch (kind_) {
    case LawKind::kBernoulli:
      return 1.0;
    case LawKind::kGaussian:
      return p1_ * p1_ + p2_ * p2_;
    case LawKind::kCuspTail:
      return kInf;  // tail integral of s^2/(2 n s^3) diverges
    case LawKind::kPointMass:
      return p1_ * p1_;
    case LawKind::kScaled:
      return p1_ * p1_ * inner_->mean_sq();
    case LawKind::kHeavyMix:
      return kInf;  // E Z^2 = infinity
  }
  return 0.0;
}

bool EntryLaw::has_finite_second_moment() const {
  return std::isfinite(mean_sq());
}

ConcentrationCertificate EntryLaw::concentration() const {
  switch (kind_) {
    case LawKind::kBernoulli:
      // P(|X - z| < 1/2) <= 1/2 for every z (atoms at +-1 are 1 apart)
      return {0.5, 0.51, true};
    case LawKind::kGaussian: {
      if (p2_ == 0.0) return {0.0, 1.0, false};
      // P(|X - z| < sd/2) <= Phi(1/2) - Phi(-1/2) ~= 0.3829
      return {0.5 * p2_, 0.45, true};
    }
    case LawKind::kCuspTail:
      // worst window is centered at 0: cusp mass 2/n (n >= 3: <= 2/3) plus
      // bulk mass < 2 a h < 0.13; certificate holds for all n >= 3
      return {0.25, 0.8, true};
    case LawKind::kPointMass:
      return {0.0, 1.0, false};
    case LawKind::kScaled: {
      const ConcentrationCertificate c = inner_->concentration();
      if (p1_ == 0.0 || !c.bounded) return {0.0, 1.0, false};
      return {std::abs(p1_) * c.a, c.b, true};
    }
    case LawKind::kHeavyMix: {
      // X = sqrt(1 - 1/n + Z^2/n) is a continuous strictly monotone image of
      // |Z|; a window of radius 1/(8n) near the left edge captures
      // P(|Z| < ~1/sqrt(2)) ~= 1/2; elsewhere less. (n bound at resolve time)
      const double n = dim_ == 0 ? 2.0 : static_cast<double>(dim_);
      return {1.0 / (8.0 * n), 0.75, true};
    }
  }
  return {0.0, 1.0, false};
}

std::string EntryLaw::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case LawKind::kBernoulli:
      return "bernoulli";
    case LawKind::kGaussian:
      os << "gaussian(" << p1_ << "," << p2_ << ")";
      return os.str();
    case LawKind::kCuspTail:
      return "cusp_tail";
    case LawKind::kPointMass:
      os << "point_mass(" << p1_ << ")";
      return os.str();
    case LawKind::kScaled:
      os << "scaled(" << inner_->to_string() << "," << p1_ << ")";
      return os.str();
    case LawKind::kHeavyMix:
      return "heavy_mix";
  }
  return "?";
}

namespace {

struct LawParser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }

  bool consume(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c))
      throw std::invalid_argument("law parse error: expected '" +
                                  std::string(1, c) + "' in \"" + s + "\"");
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (start == pos)
      throw std::invalid_argument("law parse error: expected name in \"" + s +
                                  "\"");
    return s.substr(start, pos - start);
  }

  double number() {
    skip_ws();
    std::size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(s.substr(pos), &consumed);
    } catch (const std::exception&) {
      throw std::invalid_argument("law parse error: expected number in \"" +
                                  s + "\"");
    }
    pos += consumed;
    return v;
  }

  EntryLaw law() {
    const std::string name = ident();
    if (name == "bernoulli") return EntryLaw::bernoulli();
    if (name == "cusp_tail") return EntryLaw::cusp_tail();
    if (name == "heavy_mix") return EntryLaw::heavy_mix();
    if (name == "gaussian") {
      expect('(');
      const double m = number();
      expect(',');
      const double sd = number();
      expect(')');
      return EntryLaw::gaussian(m, sd);
    }
    if (name == "point_mass") {
      expect('(');
      const double v = number();
      expect(')');
      return EntryLaw::point_mass(v);
    }
    if (name == "scaled") {
      expect('(');
      EntryLaw inner = law();
      expect(',');
      const double f = number();
      expect(')');
      return EntryLaw::scaled(std::move(inner), f);
    }
    throw std::invalid_argument("law parse error: unknown law \"" + name +
                                "\"");
  }
};

}  // namespace

EntryLaw parse_law(const std::string& text) {
  LawParser p{text};
  EntryLaw law = p.law();
  p.skip_ws();
  if (p.pos != text.size())
    throw std::invalid_argument("law parse error: trailing input in \"" +
                                text + "\"");
  return law;
}

}  // namespace sigmin::ensembles
