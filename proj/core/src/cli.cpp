#include "sigmin/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sigmin/bkappa.hpp"
#include "sigmin/config.hpp"
#include "sigmin/ensembles.hpp"
#include "sigmin/experiments.hpp"
#include "sigmin/lcd.hpp"
#include "sigmin/linalg.hpp"
#include "sigmin/matrix.hpp"
#include "sigmin/nets.hpp"
#include "sigmin/records.hpp"
#include "sigmin/rng.hpp"
#include "sigmin/rounding.hpp"
#include "sigmin/threadpool.hpp"

namespace sigmin::cli {
namespace {

using nlohmann::ordered_json;

struct GlobalFlags {
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = machine parallelism
  std::string out;
  bool seed_set = false;
};

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    for (; used < item.size(); ++used)
      if (!std::isspace(static_cast<unsigned char>(item[used])))
        throw config::ConfigError("bad number in list: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw config::ConfigError("empty number list");
  return out;
}

void write_matrix(std::ostream& out, const Matrix& A) {
  out << A.rows() << ' ' << A.cols() << '\n';
  char buf[40];
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", A(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config::ConfigError("cannot open matrix file '" + path + "'");
  std::size_t rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows == 0 || cols == 0)
    throw config::ConfigError("matrix file '" + path +
                              "': expected 'rows cols' header");
  Matrix A(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (!(in >> A(i, j)))
        throw config::ConfigError("matrix file '" + path +
                                  "': too few entries");
  return A;
}

std::ostream& output_stream(const GlobalFlags& g, std::ofstream& file) {
  if (g.out.empty()) return std::cout;
  file.open(g.out, std::ios::binary);
  if (!file)
    throw config::ConfigError("cannot open output file '" + g.out + "'");
  return file;
}

ensembles::EnsembleSpec spec_from_flags(const std::string& law,
                                        const std::string& layout,
                                        std::size_t N, std::size_t n) {
  const ensembles::EntryLaw l = ensembles::parse_law(law);
  if (layout == "iid") return ensembles::EnsembleSpec::iid(l, N, n);
  if (layout == "heavy_first_column")
    return ensembles::EnsembleSpec::heavy_first_column(l, N, n);
  throw config::ConfigError("unknown layout '" + layout +
                            "' (iid | heavy_first_column)");
}

// ---------------- subcommand bodies ----------------

int cmd_gen(const GlobalFlags& g, const std::string& law,
            const std::string& layout, std::size_t N, std::size_t n) {
  if (n == 0) throw config::ConfigError("gen: --n required");
  if (N == 0) N = n;
  const Matrix A = ensembles::generate(spec_from_flags(law, layout, N, n), g.seed);
  std::ofstream file;
  write_matrix(output_stream(g, file), A);
  return 0;
}

int cmd_bkappa(const GlobalFlags& g, double kappa, const std::string& input,
               const std::string& law, std::size_t N, std::size_t n) {
  Matrix A(1, 1);
  if (!input.empty()) {
    A = read_matrix(input);
  } else if (!law.empty()) {
    if (n == 0) throw config::ConfigError("bkappa: --n required with --law");
    A = ensembles::generate(spec_from_flags(law, "iid", N ? N : n, n), g.seed);
  } else {
    throw config::ConfigError("bkappa: need --input FILE or --law LAW");
  }
  const bkappa::BKappaResult r = bkappa::b_kappa_matrix(A, kappa);
  Vector y(A.cols());
  for (std::size_t j = 0; j < A.cols(); ++j) y[j] = A.col_norm_sq(j);
  ordered_json j;
  j["kappa"] = kappa;
  j["value"] = r.value;
  j["alpha"] = r.minimizer.alpha;
  j["multiplier"] = r.multiplier;
  j["kkt_residual"] = bkappa::kkt_residual(y, r);
  j["hs_norm_sq"] = A.hs_norm_sq();
  std::ofstream file;
  output_stream(g, file) << j.dump(2) << '\n';
  return 0;
}

int cmd_round(const GlobalFlags& g, double nu, const std::string& alpha_text,
              const std::string& xi_text, const std::string& anchor_text,
              std::size_t draws) {
  const std::vector<double> xi = parse_double_list(xi_text);
  std::vector<double> alpha = parse_double_list(alpha_text);
  if (alpha.size() == 1) alpha.assign(xi.size(), alpha.front());
  rounding::RoundingParams params;
  params.nu = nu;
  params.alpha = alpha;
  if (!anchor_text.empty()) params.anchor = parse_double_list(anchor_text);
  params.validate();
  if (params.dim() != xi.size())
    throw config::ConfigError("round: alpha/xi dimension mismatch");
  Rng rng(g.seed);
  std::ofstream file;
  std::ostream& out = output_stream(g, file);
  for (std::size_t t = 0; t < draws; ++t) {
    const rounding::RoundedPoint p = rounding::random_round(xi, params, rng);
    ordered_json j;
    j["eta"] = p.eta;
    j["k"] = p.k;
    std::vector<int> exact;
    for (bool b : p.on_lattice) exact.push_back(b ? 1 : 0);
    j["on_lattice"] = exact;
    out << j.dump() << '\n';
  }
  return 0;
}

int cmd_net_build(const GlobalFlags& g, const std::vector<std::string>& pairs) {
  const config::Config cfg = config::config_from_pairs(pairs);
  const std::size_t n = static_cast<std::size_t>(cfg.get_int("n"));
  nets::NetParams params;
  params.n = n;
  params.eps = cfg.get_number("eps");
  params.gamma = cfg.get_number("gamma");
  params.kappa = cfg.get_number("kappa");
  if (cfg.has("guard"))
    params.materialize_guard = static_cast<std::size_t>(cfg.get_int("guard"));
  const std::size_t n_centers = static_cast<std::size_t>(cfg.get_int(
      "centers", static_cast<long long>(std::max<std::size_t>(50, 10 * n))));
  const std::vector<Vector> centers =
      nets::sphere_sample(n, n_centers, derive(g.seed, 0x63747273ull));
  const nets::Net net = nets::build_main_net(centers, params);

  // cardinality ledger for the first center patch
  std::size_t total = 0, cmin = SIZE_MAX, cmax = 0;
  for (std::size_t b = 0; b < net.family.size(); ++b) {
    const std::size_t c = nets::count_net_points(net, 0, b);
    total += c;
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
  }
  const double constant =
      nets::net_cardinality_constant(net, static_cast<double>(total));
  std::vector<std::string> ledger;
  auto addf = [&ledger](const std::string& k, const std::string& v) {
    ledger.push_back(k + " " + v);
  };
  char buf[64];
  addf("cardinality.case", net.case_name());
  addf("cardinality.centers", std::to_string(net.centers.size()));
  addf("cardinality.family_size", std::to_string(net.family.size()));
  std::snprintf(buf, sizeof(buf), "%.6g", net.mu);
  addf("cardinality.mu", buf);
  addf("cardinality.points_per_center", std::to_string(total));
  addf("cardinality.min_per_member", std::to_string(cmin));
  addf("cardinality.max_per_member", std::to_string(cmax));
  std::snprintf(buf, sizeof(buf), "%.6g", constant);
  addf("cardinality.fitted_constant", buf);

  const std::string path = g.out.empty() ? "net.txt" : g.out;
  if (cfg.has("materialize") && cfg.get_int("materialize") != 0) {
    const nets::MaterializedNet mat = nets::materialize(net);
    addf("cardinality.materialized_points", std::to_string(mat.points.size()));
    nets::save_net(net, path, &mat, &ledger);
  } else {
    nets::save_net(net, path, nullptr, &ledger);
  }
  std::cout << "net written to " << path << "\n";
  for (const std::string& line : ledger) std::cout << "# " << line << "\n";
  return 0;
}

int cmd_net_verify(const GlobalFlags& g, const std::string& net_path,
                   const std::string& law, std::size_t pairs,
                   std::size_t draws, double success_target) {
  const nets::Net net = nets::load_net(net_path);
  const std::size_t n = net.params.n;
  const ensembles::EnsembleSpec spec = spec_from_flags(law, "iid", n, n);
  std::size_t found = 0;
  double max_ratio = 0.0, mean_draws = 0.0;
  for (std::size_t t = 0; t < pairs; ++t) {
    const std::uint64_t ts = trial_seed(g.seed, t);
    const Matrix A = ensembles::generate(spec, ts);
    Rng r(derive(ts, 0x76657269ull));
    const std::size_t ci =
        static_cast<std::size_t>(r.u64() % net.centers.size());
    Vector x = net.centers[ci];
    const Vector ball = unit_ball(r, n);
    axpy(0.45 * net.params.eps, ball, x);
    scale(x, 1.0 / norm(x));
    const nets::WitnessResult w = nets::find_net_witness(net, A, x, r, draws);
    found += w.found ? 1 : 0;
    mean_draws += static_cast<double>(w.draws_used);
    if (w.found && w.bound_2m > 0.0)
      max_ratio = std::max(max_ratio, w.achieved / w.bound_2m);
  }
  const double rate = static_cast<double>(found) / static_cast<double>(pairs);
  std::cout << "pairs " << pairs << "  witness rate " << rate
            << "  mean draws " << mean_draws / static_cast<double>(pairs)
            << "  max |A(x-y)|^2 / 2M " << max_ratio << "\n";
  if (rate < success_target) {
    std::cout << "verdict: FAILED (witness rate below " << success_target
              << ")\n";
    return 3;
  }
  std::cout << "verdict: PASS\n";
  return 0;
}

int cmd_lcd(const GlobalFlags& g, const std::string& a_text, double alpha,
            double c, double cap, double tol) {
  lcd::LcdQuery q;
  q.a = parse_double_list(a_text);
  q.alpha = alpha;
  q.c = c;
  q.cap = cap;
  q.tol = tol;
  const lcd::LcdResult r = lcd::lcd_vector(q);
  ordered_json j;
  j["status"] = r.status == lcd::LcdStatus::kFound ? "found" : "exceeds_cap";
  j["lo"] = r.lo;
  if (r.status == lcd::LcdStatus::kFound) {
    j["hi"] = r.hi;
    j["value"] = r.value();
  }
  j["evaluations"] = r.evaluations;
  j["exclusions"] = r.exclusions;
  std::ofstream file;
  output_stream(g, file) << j.dump(2) << '\n';
  return 0;
}

int cmd_exp(const GlobalFlags& g, const std::string& kind,
            const std::string& config_path) {
  const config::Config cfg = config::load_config(config_path);
  experiments::RunOptions opt;
  opt.seed = g.seed_set ? g.seed
                        : static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  opt.threads = g.threads == 0 ? default_thread_count() : g.threads;
  opt.keep_trial_records = true;
  const experiments::ExperimentResult res =
      experiments::run_experiment(kind, cfg, opt);
  const std::string base = g.out.empty() ? kind : g.out;
  if (!res.trials.empty())
    records::write_records(base + ".jsonl", res.trials);
  records::write_summary_json(base + ".summary.json", res.summary);
  records::write_summary_csv(base + ".csv", res.summary);
  std::cout << records::format_summary_table(res.summary);
  return res.summary.verdict ? 0 : 3;
}

int cmd_report(const std::string& summary_path, const std::string& records_path,
               const std::string& csv_out) {
  const records::CurveSummary s = records::read_summary_json(summary_path);
  if (!records_path.empty()) {
    const std::vector<records::TrialRecord> recs =
        records::read_records(records_path);
    std::size_t mismatched = 0;
    for (const records::TrialRecord& r : recs)
      mismatched += (r.config_digest != s.config_digest) ? 1 : 0;
    std::cout << "records: " << recs.size() << " ("
              << (mismatched == 0 ? "digest match" : "DIGEST MISMATCH")
              << ")\n";
    if (mismatched != 0) return 1;
  }
  if (!csv_out.empty()) records::write_summary_csv(csv_out, s);
  std::cout << records::format_summary_table(s);
  return s.verdict ? 0 : 3;
}

}  // namespace

int run(int argc, const char* const* argv) {
  GlobalFlags g;
  CLI::App app{
      "Monte Carlo toolkit for smallest-singular-value bounds: weighted "
      "nets, random rounding, deviation inequalities, and certified LCD"};
  app.fallthrough();
  app.require_subcommand(1);
  auto* seed_opt =
      app.add_option("--seed", g.seed, "base seed (default 1)");
  app.add_option("--threads", g.threads,
                 "worker threads (default: machine parallelism)");
  app.add_option("--out", g.out, "output path (or prefix for exp)");

  // gen
  auto* gen = app.add_subcommand("gen", "sample and dump a matrix");
  gen->fallthrough();
  std::string gen_law, gen_layout = "iid";
  std::size_t gen_N = 0, gen_n = 0;
  gen->add_option("--law", gen_law, "entry law, e.g. bernoulli")->required();
  gen->add_option("--layout", gen_layout, "iid | heavy_first_column");
  gen->add_option("--N", gen_N, "rows (default n)");
  gen->add_option("--n", gen_n, "columns")->required();

  // bkappa
  auto* bk = app.add_subcommand("bkappa", "weighted column functional B_kappa");
  bk->fallthrough();
  double bk_kappa = 2.0;
  std::string bk_input, bk_law;
  std::size_t bk_N = 0, bk_n = 0;
  bk->add_option("--kappa", bk_kappa, "weight budget kappa >= 1")->required();
  bk->add_option("--input", bk_input, "matrix file (from gen)");
  bk->add_option("--law", bk_law, "sample a matrix instead of reading one");
  bk->add_option("--N", bk_N, "rows");
  bk->add_option("--n", bk_n, "columns");

  // round
  auto* rd = app.add_subcommand("round", "random lattice rounding draws");
  rd->fallthrough();
  double rd_nu = 1.0;
  std::string rd_alpha, rd_xi, rd_anchor;
  std::size_t rd_draws = 1;
  rd->add_option("--nu", rd_nu, "pitch scale nu > 0")->required();
  rd->add_option("--alpha", rd_alpha, "weights, comma list (or one value)")
      ->required();
  rd->add_option("--xi", rd_xi, "point to round, comma list")->required();
  rd->add_option("--anchor", rd_anchor, "lattice origin, comma list");
  rd->add_option("--draws", rd_draws, "number of draws");

  // net build | verify
  auto* net = app.add_subcommand("net", "weighted net construction");
  net->fallthrough();
  net->require_subcommand(1);
  auto* nb = net->add_subcommand("build", "build and save a net");
  nb->fallthrough();
  std::vector<std::string> nb_pairs;
  nb->add_option("params", nb_pairs,
                 "key=value: n, eps, gamma, kappa [, centers, materialize, "
                 "guard]");
  auto* nv = net->add_subcommand("verify", "witness-check a saved net");
  nv->fallthrough();
  std::string nv_net, nv_law = "bernoulli";
  std::size_t nv_pairs = 100, nv_draws = 200;
  double nv_target = 0.99;
  nv->add_option("--net", nv_net, "net file")->required();
  nv->add_option("--law", nv_law, "entry law for test matrices");
  nv->add_option("--pairs", nv_pairs, "number of (A, x) pairs");
  nv->add_option("--draws", nv_draws, "rounding draws per pair");
  nv->add_option("--target", nv_target, "required witness rate");

  // lcd
  auto* lc = app.add_subcommand("lcd", "certified least common denominator");
  lc->fallthrough();
  std::string lc_a;
  double lc_alpha = 0.0, lc_c = 0.0, lc_cap = 0.0, lc_tol = 1e-9;
  lc->add_option("--a", lc_a, "vector, comma list")->required();
  lc->add_option("--alpha", lc_alpha, "additive slack alpha > 0")->required();
  lc->add_option("--c", lc_c, "proportional slack c in (0,1)")->required();
  lc->add_option("--cap", lc_cap, "search cap (0 = auto)");
  lc->add_option("--tol", lc_tol, "certification width");

  // exp
  auto* ex = app.add_subcommand("exp", "run a config-driven experiment");
  ex->fallthrough();
  std::string ex_kind, ex_config;
  ex->add_option("kind", ex_kind, "experiment kind")
      ->required()
      ->check(CLI::IsMember(experiments::experiment_kinds()));
  ex->add_option("--config", ex_config, "config file")->required();

  // report
  auto* rp = app.add_subcommand("report", "render a summary (verdict + table)");
  rp->fallthrough();
  std::string rp_summary, rp_records, rp_csv;
  rp->add_option("--summary", rp_summary, "summary JSON from exp")->required();
  rp->add_option("--records", rp_records, "JSONL records to cross-check");
  rp->add_option("--csv", rp_csv, "also write the fixed-column CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  g.seed_set = seed_opt->count() > 0;

  try {
    if (gen->parsed()) return cmd_gen(g, gen_law, gen_layout, gen_N, gen_n);
    if (bk->parsed())
      return cmd_bkappa(g, bk_kappa, bk_input, bk_law, bk_N, bk_n);
    if (rd->parsed())
      return cmd_round(g, rd_nu, rd_alpha, rd_xi, rd_anchor, rd_draws);
    if (net->parsed()) {
      if (nb->parsed()) return cmd_net_build(g, nb_pairs);
      return cmd_net_verify(g, nv_net, nv_law, nv_pairs, nv_draws, nv_target);
    }
    if (lc->parsed()) return cmd_lcd(g, lc_a, lc_alpha, lc_c, lc_cap, lc_tol);
    if (ex->parsed()) return cmd_exp(g, ex_kind, ex_config);
    if (rp->parsed()) return cmd_report(rp_summary, rp_records, rp_csv);
  } catch (const experiments::HypothesisRefusal& e) {
    std::cerr << "REFUSED: " << e.what() << "\n";
    return 2;
  } catch (const config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace sigmin::cli
