#include "sigmin/records.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sigmin::records {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json field_to_json(const FieldValue& v) {
  ordered_json j;
  std::visit([&j](const auto& x) { j = x; }, v);
  return j;
}

FieldValue field_from_json(const ordered_json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw std::runtime_error("records: unsupported field value type");
}

ordered_json fields_to_json(const Fields& fields) {
  ordered_json obj = ordered_json::object();
  for (const auto& [name, value] : fields) obj[name] = field_to_json(value);
  return obj;
}

Fields fields_from_json(const ordered_json& obj) {
  Fields out;
  for (auto it = obj.begin(); it != obj.end(); ++it)
    out.emplace_back(it.key(), field_from_json(it.value()));
  return out;
}

ordered_json point_to_json(const CurvePoint& p) {
  ordered_json j = ordered_json::object();
  j["grid"] = p.grid;
  j["estimate"] = p.estimate;
  j["wilson_lo"] = p.lo;
  j["wilson_hi"] = p.hi;
  if (p.has_bound) {
    j["bound"] = p.bound;
    j["dominated"] = p.dominated;
  }
  return j;
}

CurvePoint point_from_json(const ordered_json& j) {
  CurvePoint p;
  p.grid = j.at("grid").get<double>();
  p.estimate = j.at("estimate").get<double>();
  p.lo = j.at("wilson_lo").get<double>();
  p.hi = j.at("wilson_hi").get<double>();
  if (j.contains("bound")) {
    p.has_bound = true;
    p.bound = j.at("bound").get<double>();
    p.dominated = j.at("dominated").get<bool>();
  }
  return p;
}

void check_intervals(const CurveSummary& s) {
  for (const CurvePoint& p : s.points)
    if (!(p.lo <= p.estimate && p.estimate <= p.hi))
      throw std::runtime_error(
          "records: interval does not contain the point estimate");
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

}  // namespace

std::string to_json_line(const TrialRecord& record) {
  ordered_json j = ordered_json::object();
  j["experiment"] = record.experiment;
  j["config"] = record.config_digest;
  j["trial"] = record.trial;
  j["seed"] = record.seed;
  j["timestamp"] = record.timestamp;
  j["outcomes"] = fields_to_json(record.outcomes);
  return j.dump();
}

void write_records(const std::string& path,
                   const std::vector<TrialRecord>& recs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("records: cannot open '" + path + "'");
  for (const TrialRecord& r : recs) out << to_json_line(r) << '\n';
  if (!out) throw std::runtime_error("records: write failed for '" + path + "'");
}

std::vector<TrialRecord> read_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("records: cannot open '" + path + "'");
  std::vector<TrialRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const ordered_json j = ordered_json::parse(line);
    TrialRecord r;
    r.experiment = j.at("experiment").get<std::string>();
    r.config_digest = j.at("config").get<std::string>();
    r.trial = j.at("trial").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.timestamp = j.at("timestamp").get<std::uint64_t>();
    r.outcomes = fields_from_json(j.at("outcomes"));
    out.push_back(std::move(r));
  }
  return out;
}

std::string summary_to_json(const CurveSummary& summary) {
  check_intervals(summary);
  ordered_json j = ordered_json::object();
  j["experiment"] = summary.experiment;
  j["config"] = summary.config_digest;
  j["grid_name"] = summary.grid_name;
  j["points"] = ordered_json::array();
  for (const CurvePoint& p : summary.points)
    j["points"].push_back(point_to_json(p));
  j["fitted"] = fields_to_json(summary.fitted);
  j["verdict"] = summary.verdict;
  j["note"] = summary.note;
  return j.dump(2);
}

CurveSummary summary_from_json(const std::string& json_text) {
  const ordered_json j = ordered_json::parse(json_text);
  CurveSummary s;
  s.experiment = j.at("experiment").get<std::string>();
  s.config_digest = j.at("config").get<std::string>();
  s.grid_name = j.at("grid_name").get<std::string>();
  for (const ordered_json& pj : j.at("points"))
    s.points.push_back(point_from_json(pj));
  s.fitted = fields_from_json(j.at("fitted"));
  s.verdict = j.at("verdict").get<bool>();
  s.note = j.at("note").get<std::string>();
  return s;
}

void write_summary_json(const std::string& path, const CurveSummary& summary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("records: cannot open '" + path + "'");
  out << summary_to_json(summary) << '\n';
  if (!out) throw std::runtime_error("records: write failed for '" + path + "'");
}

CurveSummary read_summary_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("records: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return summary_from_json(buf.str());
}

void write_summary_csv(const std::string& path, const CurveSummary& summary) {
  check_intervals(summary);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("records: cannot open '" + path + "'");
  out << "grid,estimate,wilson_lo,wilson_hi,bound,dominated\n";
  for (const CurvePoint& p : summary.points) {
    out << csv_number(p.grid) << ',' << csv_number(p.estimate) << ','
        << csv_number(p.lo) << ',' << csv_number(p.hi) << ',';
    if (p.has_bound)
      out << csv_number(p.bound) << ',' << (p.dominated ? 1 : 0);
    else
      out << ',';
    out << '\n';
  }
  if (!out) throw std::runtime_error("records: write failed for '" + path + "'");
}

std::string format_summary_table(const CurveSummary& summary) {
  std::ostringstream out;
  out << "experiment: " << summary.experiment
      << "   config: " << summary.config_digest << '\n';
  if (!summary.note.empty()) out << "note: " << summary.note << '\n';
  char row[256];
  std::snprintf(row, sizeof(row), "%12s %12s %12s %12s %12s %10s\n",
                summary.grid_name.c_str(), "estimate", "wilson_lo",
                "wilson_hi", "bound", "dominated");
  out << row;
  for (const CurvePoint& p : summary.points) {
    if (p.has_bound)
      std::snprintf(row, sizeof(row),
                    "%12.6g %12.6g %12.6g %12.6g %12.6g %10s\n", p.grid,
                    p.estimate, p.lo, p.hi, p.bound,
                    p.dominated ? "yes" : "NO");
    else
      std::snprintf(row, sizeof(row), "%12.6g %12.6g %12.6g %12.6g %12s %10s\n",
                    p.grid, p.estimate, p.lo, p.hi, "-", "-");
    out << row;
  }
  if (!summary.fitted.empty()) {
    out << "fitted constants:\n";
    for (const auto& [name, value] : summary.fitted) {
      out << "  " << name << " = ";
      std::visit(
          [&out](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) {
              char buf[40];
              std::snprintf(buf, sizeof(buf), "%.8g", x);
              out << buf;
            } else if constexpr (std::is_same_v<T, bool>) {
              out << (x ? "true" : "false");
            } else {
              out << x;
            }
          },
          value);
      out << '\n';
    }
  }
  out << "verdict: " << (summary.verdict ? "PASS" : "FAILED") << '\n';
  return out.str();
}

}  // namespace sigmin::records
