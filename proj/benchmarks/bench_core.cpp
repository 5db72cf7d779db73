// Microbenchmarks for the hot paths: the weighted-column functional, the
// smallest-singular-value solver, random rounding, net membership and
// witness search, and lattice-distance threshold certification.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "sigmin/bkappa.hpp"
#include "sigmin/ensembles.hpp"
#include "sigmin/lcd.hpp"
#include "sigmin/linalg.hpp"
#include "sigmin/matrix.hpp"
#include "sigmin/nets.hpp"
#include "sigmin/rng.hpp"
#include "sigmin/rounding.hpp"

namespace {

using namespace sigmin;
using ensembles::EnsembleSpec;
using ensembles::EntryLaw;

Vector random_norms(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Vector y(n);
  for (double& v : y) v = std::exp(2.0 * rng.pm1());
  return y;
}

void BM_BKappa(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Vector y = random_norms(n, 42);
  for (auto _ : state)
    benchmark::DoNotOptimize(bkappa::b_kappa(y, 2.0).value);
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()));
}
BENCHMARK(BM_BKappa)->Arg(10)->Arg(100)->Arg(1000);

void BM_SmallestSingularValue(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto spec = EnsembleSpec::square_iid(EntryLaw::gaussian(0.0, 1.0), n);
  const Matrix A = ensembles::generate(spec, 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(linalg::smallest_singular_value(A));
}
BENCHMARK(BM_SmallestSingularValue)->Arg(50)->Arg(100)->Arg(200);

void BM_GenerateMatrix(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto spec = EnsembleSpec::square_iid(EntryLaw::gaussian(0.0, 1.0), n);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const Matrix A = ensembles::generate(spec, seed++);
    benchmark::DoNotOptimize(A.hs_norm_sq());
  }
}
BENCHMARK(BM_GenerateMatrix)->Arg(100)->Arg(200);

void BM_RandomRound(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  rounding::RoundingParams pr;
  pr.nu = 1.0;
  pr.alpha.assign(n, 0.7);
  Rng rng(11);
  Vector xi(n);
  for (double& v : xi) v = rng.gaussian();
  for (auto _ : state)
    benchmark::DoNotOptimize(rounding::random_round(xi, pr, rng).eta[0]);
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(n));
}
BENCHMARK(BM_RandomRound)->Arg(50)->Arg(500);

void BM_NetWitness(benchmark::State& state) {
  const std::size_t n = 6;
  nets::NetParams np;
  np.n = n;
  np.eps = 0.05;
  np.gamma = 2.0;
  np.kappa = 2.0;
  const auto centers = nets::sphere_sample(n, 60, 3);
  const auto net = nets::build_main_net(centers, np);
  const auto spec = EnsembleSpec::square_iid(EntryLaw::bernoulli(), n);
  const Matrix A = ensembles::generate(spec, 5);
  Rng rng(17);
  std::size_t ci = 0;
  for (auto _ : state) {
    const Vector& x = net.centers[ci++ % net.centers.size()];
    benchmark::DoNotOptimize(nets::find_net_witness(net, A, x, rng).found);
  }
}
BENCHMARK(BM_NetWitness);

void BM_NetMembership(benchmark::State& state) {
  const std::size_t n = 6;
  nets::NetParams np;
  np.n = n;
  np.eps = 0.05;
  np.gamma = 2.0;
  np.kappa = 2.0;
  const auto centers = nets::sphere_sample(n, 60, 3);
  const auto net = nets::build_main_net(centers, np);
  nets::NetPoint p;
  p.center_index = 0;
  p.beta_index = 0;
  p.k.assign(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(nets::net_contains(net, p));
}
BENCHMARK(BM_NetMembership);

void BM_LcdVector(benchmark::State& state) {
  lcd::LcdQuery q;
  q.a = Vector(8, 1.0 / std::sqrt(8.0));
  q.alpha = std::sqrt(8.0) / 8.0;
  q.c = 0.1;
  q.cap = 8.0;
  q.tol = 1e-9;
  for (auto _ : state) benchmark::DoNotOptimize(lcd::lcd_vector(q).hi);
}
BENCHMARK(BM_LcdVector);

}  // namespace

BENCHMARK_MAIN();
