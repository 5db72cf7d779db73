#pragma once

// Experiment persistence: JSONL trial records and curve summaries.
//
// Determinism contract: a record stream is a pure function of
// (config, seed, trial count).  The `timestamp` field is the logical trial
// index, not wall-clock time, so re-runs are byte-identical; records are
// written in trial order regardless of how many threads produced them.
// Every record carries the 16-hex-digit FNV-1a digest of the exact config
// text, binding it to the configuration that produced it.
//
// Summary CSV column order is fixed and documented:
//   grid,estimate,wilson_lo,wilson_hi,bound,dominated
// Fitted constants and the overall verdict live in the JSON summary; the CSV
// holds only the plot-ready curve columns.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sigmin::records {

using FieldValue = std::variant<double, long long, bool, std::string>;
// Ordered named scalars; order is preserved in the serialized output.
using Fields = std::vector<std::pair<std::string, FieldValue>>;

struct TrialRecord {
  std::string experiment;
  std::string config_digest;  // 16 hex chars
  std::uint64_t trial = 0;    // logical index within the run
  std::uint64_t seed = 0;     // per-trial derived seed
  std::uint64_t timestamp = 0;  // logical timestamp == trial index
  Fields outcomes;
};

struct CurvePoint {
  double grid = 0.0;
  double estimate = 0.0;
  double lo = 0.0;  // Wilson 95% lower
  double hi = 0.0;  // Wilson 95% upper
  // Bound value at this grid point; NaN when the experiment has no
  // pointwise bound to compare against.
  double bound = 0.0;
  bool has_bound = false;
  bool dominated = true;  // bound >= estimate + interval radius (if bound)
};

struct CurveSummary {
  std::string experiment;
  std::string config_digest;
  std::string grid_name;  // e.g. "eps", "kappa", "batch", "column"
  std::vector<CurvePoint> points;
  Fields fitted;       // named fitted constants / derived scalars
  bool verdict = true;  // dominance holds at every grid point with a bound
  std::string note;     // hypothesis flags and context, free text
};

std::string to_json_line(const TrialRecord& record);
void write_records(const std::string& path,
                   const std::vector<TrialRecord>& recs);
std::vector<TrialRecord> read_records(const std::string& path);

std::string summary_to_json(const CurveSummary& summary);
CurveSummary summary_from_json(const std::string& json_text);
void write_summary_json(const std::string& path, const CurveSummary& summary);
CurveSummary read_summary_json(const std::string& path);

// Fixed-column CSV: grid,estimate,wilson_lo,wilson_hi,bound,dominated.
// `bound` is empty for points without one; `dominated` is 1/0.
void write_summary_csv(const std::string& path, const CurveSummary& summary);

// Human-readable fixed-width table of a summary (the `report` subcommand).
std::string format_summary_table(const CurveSummary& summary);

}  // namespace sigmin::records
