#pragma once

// Random matrix ensembles: a specification of dimensions plus an assignment
// of entry laws, and deterministic generation from a seed.
//
// Generation draws entry (i, j) from its own stream keyed by (seed, i, j),
// so the value of an entry never depends on the matrix dimensions or on the
// order entries are filled in: growing N appends rows without perturbing
// existing entries, which the reproducibility tests rely on.

#include <cstdint>
#include <string>
#include <vector>

#include "sigmin/laws.hpp"
#include "sigmin/matrix.hpp"

namespace sigmin::ensembles {

enum class LawLayout {
  kUniform,    // one law for every entry
  kPerColumn,  // laws[j] governs column j
  kPerEntry,   // laws[i * n + j] governs entry (i, j)
};

struct EnsembleSpec {
  std::size_t N = 0;  // rows
  std::size_t n = 0;  // columns
  LawLayout layout = LawLayout::kUniform;
  std::vector<EntryLaw> laws;  // size 1 / n / N*n according to layout

  // --- factories ---
  static EnsembleSpec iid(EntryLaw law, std::size_t N, std::size_t n);
  static EnsembleSpec square_iid(EntryLaw law, std::size_t n) {
    return iid(std::move(law), n, n);
  }
  // base law everywhere except column 0, which is scaled by sqrt(n):
  // one column sqrt(n) times heavier than the rest
  static EnsembleSpec heavy_first_column(const EntryLaw& base, std::size_t N,
                                         std::size_t n);

  const EntryLaw& law_at(std::size_t i, std::size_t j) const;

  // Rows are identically distributed vectors whenever the law assignment
  // does not vary within a column.
  bool rows_identically_distributed() const {
    return layout != LawLayout::kPerEntry;
  }

  // All entry laws have a concentration certificate (a, b) with b < 1.
  bool all_entries_concentration_bounded() const;
  // smallest documented certificate over entries: max a is not meaningful
  // across different laws, so this reports the weakest (largest b) pair
  ConcentrationCertificate weakest_concentration() const;

  bool all_entries_finite_second_moment() const;

  // sum over entries of E a_ij^2 (maybe +infinity)
  double expected_hs_norm_sq() const;

  std::string describe() const;

  void validate() const;  // throws std::invalid_argument on bad shape
};

// Deterministic generation: entry (i, j) is drawn from the stream keyed by
// entry_key(seed, i, j), after resolving dimension-coupled laws with n.
Matrix generate(const EnsembleSpec& spec, std::uint64_t seed);

// Single entry, same value generate() would place at (i, j).
double generate_entry(const EnsembleSpec& spec, std::uint64_t seed,
                      std::size_t i, std::size_t j);

}  // namespace sigmin::ensembles
