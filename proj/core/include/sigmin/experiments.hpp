#pragma once

// Config-driven Monte Carlo experiments.
//
// Every experiment is a pure function of (config, seed): trials draw from
// independently derived per-trial streams, results are aggregated in trial
// order, and the logical trial index doubles as the record timestamp, so
// re-runs are byte-identical and the thread count never changes the output.
//
// Hypothesis pre-checks run before sampling.  A failed pre-check raises
// HypothesisRefusal naming the violated bound (the CLI maps it to exit 2);
// malformed or out-of-range configuration raises config::ConfigError
// (exit 1).  A finished run whose dominance verdict fails is returned
// normally with summary.verdict == false (exit 3 at the CLI).
//
// Dominance accounting never compares raw estimates.  Three styles, chosen
// per experiment and documented in the summary note:
//   * fitted bounds (smallball, levy, tensorization): the constant is fit so
//     that bound >= estimate + upper interval radius at every grid point;
//   * analytic a-priori bounds (bkappa deviation): the verdict asks that the
//     estimate not exceed bound + upper interval radius, i.e. the interval
//     cannot certify a violation;
//   * two-sided comparisons (sigma vs distance, projection isotropy): the
//     two empirical sides must agree within their combined radii (or a
//     stated multiple of the standard error).
//
// Experiment kinds and their config keys are documented in README.md; the
// dispatcher run_experiment() maps a kind name to its runner.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigmin/config.hpp"
#include "sigmin/records.hpp"

namespace sigmin::experiments {

// A hypothesis pre-check failed; the message names the violated bound.
struct HypothesisRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  // Keep per-trial records in memory (the CLI writes them as JSONL).
  // Large desk-scale runs (10^6 trials) can disable this and keep only the
  // summary; the config key `trial_records = 0` does the same.
  bool keep_trial_records = true;
};

struct ExperimentResult {
  records::CurveSummary summary;
  std::vector<records::TrialRecord> trials;
};

// P(sigma_min < eps * d / sqrt(n)) across the eps grid, d = N - n + 1,
// with the fitted square bound C*eps + e^{-c*min(p,1)*n} or the fitted
// rectangular bound (C*eps)^d * log(1/eps)^{d+1} + e^{-c*N}.
ExperimentResult run_smallball(const config::Config& cfg,
                               const RunOptions& opt);

// Exceedance frequency of B_kappa(A) >= 2s * sum_i (E|Ae_i|^{2p})^{1/p}
// against the analytic bound kappa^{-2pn} (1 + s^{-p})^n over a grid in
// exactly one of kappa / s / p.
ExperimentResult run_bkappa_deviation(const config::Config& cfg,
                                      const RunOptions& opt);

// Witness-search comparison of the weighted main net against the
// Hilbert-Schmidt net (gamma = 2, kappa = 1) on random (A, x) pairs;
// fits the realized constants C0 and C3 and checks seed-batch stability.
ExperimentResult run_net_comparison(const config::Config& cfg,
                                    const RunOptions& opt);

// P(sum_{i<=M} Y_i^2 <= M eps^2) against the fitted (C K eps)^M with the
// documented scalar small-ball constant K.
ExperimentResult run_tensorization(const config::Config& cfg,
                                   const RunOptions& opt);

// Sliding-window Levy concentration of <v, u> over the eps grid with the
// fitted C eps / |u| line on spread directions.
ExperimentResult run_levy(const config::Config& cfg, const RunOptions& opt);

// Mean squared norm of the last-d columns projected onto the orthogonal
// complement of the others, against (2d-1)/N * E|Ae_i|^2.
ExperimentResult run_projection_isotropy(const config::Config& cfg,
                                         const RunOptions& opt);

// Small-ball probability of the incompressible infimum against the averaged
// column-to-complement distance tail, across the eps grid.
ExperimentResult run_sigma_vs_distance(const config::Config& cfg,
                                       const RunOptions& opt);

// Dispatch by kind name: smallball, bkappa, netcomp, tensorization, levy,
// projection, sigdist. Throws config::ConfigError for unknown kinds.
ExperimentResult run_experiment(const std::string& kind,
                                const config::Config& cfg,
                                const RunOptions& opt);

std::vector<std::string> experiment_kinds();

}  // namespace sigmin::experiments
