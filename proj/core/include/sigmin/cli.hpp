#pragma once

// Command-line front end.
//
// Subcommands: gen, bkappa, round, net build|verify, lcd, exp <kind>, report.
// Global flags --seed, --threads, --out work before or after the subcommand.
//
// Exit codes: 0 success; 1 configuration error (bad flags, bad config file,
// out-of-range parameters); 2 hypothesis-check refusal (an experiment
// pre-check found the ensemble outside a theorem's hypotheses); 3
// verification verdict FAILED (a dominance or stability check did not hold
// beyond its interval accounting).

namespace sigmin::cli {

int run(int argc, const char* const* argv);

}  // namespace sigmin::cli
