#include "sigmin/ensembles.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sigmin::ensembles {

EnsembleSpec EnsembleSpec::iid(EntryLaw law, std::size_t N, std::size_t n) {
  EnsembleSpec spec;
  spec.N = N;
  spec.n = n;
  spec.layout = LawLayout::kUniform;
  spec.laws.push_back(std::move(law));
  spec.validate();
  return spec;
}

EnsembleSpec EnsembleSpec::heavy_first_column(const EntryLaw& base,
                                              std::size_t N, std::size_t n) {
  EnsembleSpec spec;
  spec.N = N;
  spec.n = n;
  spec.layout = LawLayout::kPerColumn;
  spec.laws.reserve(n);
  spec.laws.push_back(
      EntryLaw::scaled(base, std::sqrt(static_cast<double>(n))));
  for (std::size_t j = 1; j < n; ++j) spec.laws.push_back(base);
  spec.validate();
  return spec;
}

const EntryLaw& EnsembleSpec::law_at(std::size_t i, std::size_t j) const {
  switch (layout) {
    case LawLayout::kUniform:
      return laws[0];
    case LawLayout::kPerColumn:
      return laws[j];
    case LawLayout::kPerEntry:
      return laws[i * n + j];
  }
  return laws[0];
}

bool EnsembleSpec::all_entries_concentration_bounded() const {
  for (const auto& law : laws)
    if (!law.resolved_with(n).concentration().bounded) return false;
  return true;
}

ConcentrationCertificate EnsembleSpec::weakest_concentration() const {
  ConcentrationCertificate worst{0.0, 0.0, true};
  for (const auto& law : laws) {
    const auto c = law.resolved_with(n).concentration();
    if (!c.bounded) return {0.0, 1.0, false};
    if (c.b > worst.b) worst = c;
  }
  return worst;
}

bool EnsembleSpec::all_entries_finite_second_moment() const {
  for (const auto& law : laws)
    if (!law.resolved_with(n).has_finite_second_moment()) return false;
  return true;
}

double EnsembleSpec::expected_hs_norm_sq() const {
  double total = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < n; ++j)
      total += law_at(i, j).resolved_with(n).mean_sq();
  return total;
}

std::string EnsembleSpec::describe() const {
  std::ostringstream os;
  os << N << "x" << n << " ";
  switch (layout) {
    case LawLayout::kUniform:
      os << "iid " << laws[0].to_string();
      break;
    case LawLayout::kPerColumn:
      os << "per-column [" << laws[0].to_string();
      for (std::size_t j = 1; j < laws.size() && j < 4; ++j)
        os << "," << laws[j].to_string();
      if (laws.size() > 4) os << ",...";
      os << "]";
      break;
    case LawLayout::kPerEntry:
      os << "per-entry (" << laws.size() << " laws)";
      break;
  }
  return os.str();
}

void EnsembleSpec::validate() const {
  if (N == 0 || n == 0)
    throw std::invalid_argument("ensemble: dimensions must be positive");
  std::size_t expect = 0;
  switch (layout) {
    case LawLayout::kUniform:
      expect = 1;
      break;
    case LawLayout::kPerColumn:
      expect = n;
      break;
    case LawLayout::kPerEntry:
      expect = N * n;
      break;
  }
  if (laws.size() != expect)
    throw std::invalid_argument("ensemble: law list has wrong size");
}

Matrix generate(const EnsembleSpec& spec, std::uint64_t seed) {
  spec.validate();
  Matrix A(spec.N, spec.n);
  // Resolve each distinct law once (uniform/per-column layouts share laws).
  std::vector<EntryLaw> resolved;
  resolved.reserve(spec.laws.size());
  for (const auto& law : spec.laws) resolved.push_back(law.resolved_with(spec.n));
  for (std::size_t i = 0; i < spec.N; ++i) {
    for (std::size_t j = 0; j < spec.n; ++j) {
      std::size_t idx = 0;
      switch (spec.layout) {
        case LawLayout::kUniform:
          idx = 0;
          break;
        case LawLayout::kPerColumn:
          idx = j;
          break;
        case LawLayout::kPerEntry:
          idx = i * spec.n + j;
          break;
      }
      Rng rng(entry_key(seed, i, j));
      A(i, j) = resolved[idx].sample(rng);
    }
  }
  return A;
}

double generate_entry(const EnsembleSpec& spec, std::uint64_t seed,
                      std::size_t i, std::size_t j) {
  Rng rng(entry_key(seed, i, j));
  return spec.law_at(i, j).resolved_with(spec.n).sample(rng);
}

}  // namespace sigmin::ensembles
