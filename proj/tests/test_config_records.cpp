#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sigmin/config.hpp"
#include "sigmin/records.hpp"
#include "support/oracles.hpp"

using namespace sigmin;
using config::Config;
using config::ConfigError;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("grammar: scalars, strings, arrays, comments") {
    const std::string text =
        "sigmin-config v1\n"
        "# a full comment line\n"
        "n = 6\n"
        "eps = [0.05, 0.1, 0.2]  # trailing comment\n"
        "law = scaled(bernoulli,2)\n"
        "rate = 0.125\n"
        "label.sub = curve_a\n";
    const Config cfg = config::parse_config(text);
    CHECK(cfg.get_int("n") == 6);
    CHECK(cfg.get_number("rate") == 0.125);
    CHECK(cfg.get_string("law") == "scaled(bernoulli,2)");
    CHECK(cfg.get_string("label.sub") == "curve_a");
    const auto arr = cfg.get_array("eps");
    REQUIRE(arr.size() == 3);
    CHECK(arr[0] == 0.05);
    CHECK(arr[2] == 0.2);
    CHECK(cfg.has("n"));
    CHECK_FALSE(cfg.has("missing"));
    // fallbacks only fire when the key is absent
    CHECK(cfg.get_number("missing", 7.5) == 7.5);
    CHECK(cfg.get_int("missing", 3) == 3);
    CHECK(cfg.get_string("missing", "d") == "d");
    CHECK(cfg.get_array("missing", {1.0}).size() == 1);
    CHECK(cfg.get_number("rate", 99.0) == 0.125);
  }

  TEST_CASE("grammar errors") {
    CHECK_THROWS_AS(config::parse_config("n = 6\n"), ConfigError);  // no header
    CHECK_THROWS_AS(
        config::parse_config("sigmin-config v1\nn = 1\nn = 2\n"),
        ConfigError);  // duplicate key
    CHECK_THROWS_AS(config::parse_config("sigmin-config v1\n= 3\n"),
                    ConfigError);
    CHECK_THROWS_AS(config::parse_config("sigmin-config v1\n9bad = 3\n"),
                    ConfigError);  // identifier must not start with a digit
    const Config cfg =
        config::parse_config("sigmin-config v1\nx = 2.5\ns = word\n");
    CHECK_THROWS_AS(cfg.get_int("x"), ConfigError);     // not integral
    CHECK_THROWS_AS(cfg.get_number("s"), ConfigError);  // not a number
    CHECK_THROWS_AS(cfg.get_array("s"), ConfigError);   // not an array
    // scalars promote to one-element arrays (sweep axes accept both forms)
    CHECK(cfg.get_array("x") == std::vector<double>{2.5});
    CHECK_THROWS_AS(cfg.require("nope"), ConfigError);
  }

  TEST_CASE("digest is the FNV-1a of the exact bytes") {
    const std::string text = "sigmin-config v1\nn = 4\n";
    const Config cfg = config::parse_config(text);
    CHECK(cfg.raw_text == text);
    CHECK(cfg.digest == config::fnv1a64(text));
    CHECK(cfg.digest == oracles::fnv1a64_reference(text));
    CHECK(config::digest_hex(cfg.digest).size() == 16);
    // a one-byte change moves the digest
    CHECK(config::fnv1a64("sigmin-config v1\nn = 5\n") != cfg.digest);
    // reference hash of the empty string is the FNV-1a offset basis
    CHECK(config::fnv1a64("") == 14695981039346656037ull);
  }

  TEST_CASE("file loading binds the digest to the file bytes") {
    const std::string path = "config_load_test.cfg";
    const std::string text =
        "sigmin-config v1\nn = 3\nlaw = gaussian(0,1)\n";
    {
      std::ofstream out(path, std::ios::binary);
      out << text;
    }
    const Config cfg = config::load_config(path);
    CHECK(cfg.digest == config::fnv1a64(text));
    CHECK(cfg.get_int("n") == 3);
    std::remove(path.c_str());
    CHECK_THROWS_AS(config::load_config("does_not_exist.cfg"), ConfigError);
  }

  TEST_CASE("pair form is equivalent to the canonical text") {
    const Config cfg = config::config_from_pairs(
        {"n=6", "eps=0.05", "law=scaled(bernoulli,2)"});
    CHECK(cfg.get_int("n") == 6);
    CHECK(cfg.get_number("eps") == 0.05);
    CHECK(cfg.get_string("law") == "scaled(bernoulli,2)");
    // digest covers the canonical rewritten text: reparsing it is a fixpoint
    const Config again = config::parse_config(cfg.raw_text);
    CHECK(again.digest == cfg.digest);
    CHECK(again.get_int("n") == 6);
    CHECK_THROWS_AS(config::config_from_pairs({"noequals"}), ConfigError);
  }
}

TEST_SUITE("records") {
  TEST_CASE("trial records round trip through JSONL") {
    std::vector<records::TrialRecord> recs(3);
    for (std::size_t t = 0; t < recs.size(); ++t) {
      recs[t].experiment = "smallball";
      recs[t].config_digest = "0123456789abcdef";
      recs[t].trial = t;
      recs[t].seed = 1000 + t;
      recs[t].timestamp = t;
      recs[t].outcomes = {
          {"sigma", records::FieldValue{0.5 + static_cast<double>(t)}},
          {"count", records::FieldValue{static_cast<long long>(7 * t)}},
          {"ok", records::FieldValue{t % 2 == 0}},
          {"tag", records::FieldValue{std::string("trial")}},
      };
    }
    const std::string path = "records_roundtrip_test.jsonl";
    records::write_records(path, recs);
    const auto back = records::read_records(path);
    REQUIRE(back.size() == recs.size());
    for (std::size_t t = 0; t < recs.size(); ++t) {
      CHECK(back[t].experiment == recs[t].experiment);
      CHECK(back[t].config_digest == recs[t].config_digest);
      CHECK(back[t].trial == recs[t].trial);
      CHECK(back[t].seed == recs[t].seed);
      CHECK(back[t].timestamp == recs[t].timestamp);
      REQUIRE(back[t].outcomes.size() == recs[t].outcomes.size());
      for (std::size_t f = 0; f < recs[t].outcomes.size(); ++f) {
        CHECK(back[t].outcomes[f].first == recs[t].outcomes[f].first);
        CHECK(back[t].outcomes[f].second == recs[t].outcomes[f].second);
      }
    }
    // byte determinism: writing the same records twice gives the same bytes
    const std::string bytes1 = slurp(path);
    records::write_records(path, recs);
    CHECK(slurp(path) == bytes1);
    std::remove(path.c_str());
    // single-line serialization carries the experiment name
    const std::string line = records::to_json_line(recs[0]);
    CHECK(line.find("\"experiment\"") != std::string::npos);
    CHECK(line.find("smallball") != std::string::npos);
    CHECK(line.find('\n') == std::string::npos);
  }

  TEST_CASE("curve summaries round trip through JSON") {
    records::CurveSummary s;
    s.experiment = "bkappa";
    s.config_digest = "fedcba9876543210";
    s.grid_name = "kappa";
    records::CurvePoint p1;
    p1.grid = 1.5;
    p1.estimate = 0.25;
    p1.lo = 0.125;
    p1.hi = 0.5;
    p1.bound = 0.75;
    p1.has_bound = true;
    p1.dominated = true;
    records::CurvePoint p2;
    p2.grid = 2.0;
    p2.estimate = 0.5;
    p2.lo = 0.25;
    p2.hi = 0.75;
    s.points = {p1, p2};
    s.fitted = {{"C", records::FieldValue{1.25}},
                {"trials", records::FieldValue{static_cast<long long>(100)}},
                {"stable", records::FieldValue{true}},
                {"mode", records::FieldValue{std::string("exact")}}};
    s.verdict = true;
    s.note = "hypothesis ok";
    const std::string json = records::summary_to_json(s);
    const auto back = records::summary_from_json(json);
    CHECK(back.experiment == s.experiment);
    CHECK(back.config_digest == s.config_digest);
    CHECK(back.grid_name == s.grid_name);
    CHECK(back.verdict == s.verdict);
    CHECK(back.note == s.note);
    REQUIRE(back.points.size() == 2);
    CHECK(back.points[0].bound == 0.75);
    CHECK(back.points[0].has_bound);
    CHECK_FALSE(back.points[1].has_bound);
    CHECK(back.fitted == s.fitted);
    // file round trip
    const std::string path = "summary_roundtrip_test.json";
    records::write_summary_json(path, s);
    const auto from_file = records::read_summary_json(path);
    CHECK(from_file.points.size() == 2);
    std::remove(path.c_str());
  }

  TEST_CASE("CSV has the fixed column order and formatting") {
    records::CurveSummary s;
    s.experiment = "x";
    s.config_digest = "0";
    s.grid_name = "eps";
    records::CurvePoint p1;
    p1.grid = 0.5;
    p1.estimate = 0.25;
    p1.lo = 0.125;
    p1.hi = 0.375;
    p1.bound = 0.5;
    p1.has_bound = true;
    p1.dominated = true;
    records::CurvePoint p2;
    p2.grid = 1.0;
    p2.estimate = 0.5;
    p2.lo = 0.375;
    p2.hi = 0.625;
    records::CurvePoint p3 = p1;
    p3.grid = 2.0;
    p3.dominated = false;
    s.points = {p1, p2, p3};
    const std::string path = "summary_csv_test.csv";
    records::write_summary_csv(path, s);
    const std::string expect =
        "grid,estimate,wilson_lo,wilson_hi,bound,dominated\n"
        "0.5,0.25,0.125,0.375,0.5,1\n"
        "1,0.5,0.375,0.625,,\n"
        "2,0.25,0.125,0.375,0.5,0\n";
    CHECK(slurp(path) == expect);
    std::remove(path.c_str());
    // malformed intervals are refused
    records::CurveSummary bad = s;
    bad.points[0].lo = 0.3;  // above the estimate
    CHECK_THROWS(records::write_summary_csv(path, bad));
  }

  TEST_CASE("report table carries the verdict") {
    records::CurveSummary s;
    s.experiment = "rounding";
    s.config_digest = "abc";
    s.grid_name = "t";
    records::CurvePoint p;
    p.grid = 0.5;
    p.estimate = 0.1;
    p.lo = 0.05;
    p.hi = 0.2;
    s.points = {p};
    s.fitted = {{"C", records::FieldValue{2.0}}};
    s.verdict = true;
    std::string table = records::format_summary_table(s);
    CHECK(table.find("experiment: rounding") != std::string::npos);
    CHECK(table.find("verdict: PASS") != std::string::npos);
    CHECK(table.find("estimate") != std::string::npos);
    s.verdict = false;
    table = records::format_summary_table(s);
    CHECK(table.find("verdict: FAILED") != std::string::npos);
  }
}
