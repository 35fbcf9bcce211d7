#include <random>

#include <benchmark/benchmark.h>

#include "rmlift/cltc.hpp"
#include "rmlift/transversal.hpp"

using namespace rmlift;

namespace {

LiftedGraph make_lift(std::uint32_t p, std::uint32_t m, std::size_t delta, std::size_t t, std::uint64_t seed) {
  Field f = make_field(p, m);
  MultiGraph base = build_base_graph(f, 1, delta);
  std::mt19937_64 rng(seed);
  VertexLabeling lab;
  lab.t = t;
  for (std::size_t v = 0; v < base.num_vertices(); ++v) {
    Vec l(t);
    for (auto& x : l) x = static_cast<elem>(rng() % f.q());
    lab.labels.push_back(l);
  }
  return LiftedGraph(base, lab);
}

void field_mul(benchmark::State& state) {
  Field f = make_field(2, static_cast<std::uint32_t>(state.range(0)));
  std::mt19937 rng(1);
  Vec a(1024), b(1024);
  for (auto& x : a) x = static_cast<elem>(rng() % f.q());
  for (auto& x : b) x = static_cast<elem>(rng() % f.q());
  for (auto _ : state) {
    elem acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc = f.add(acc, f.mul(a[i], b[i]));
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.size()));
}
BENCHMARK(field_mul)->Arg(2)->Arg(4)->Arg(8);

void sparse_rank(benchmark::State& state) {
  Field f = make_field(7, 1);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(2);
  std::vector<Triplet> t;
  for (std::uint32_t i = 0; i < n; ++i)
    for (int k = 0; k < 6; ++k) t.emplace_back(i, static_cast<std::uint32_t>(rng() % n), 1 + rng() % 6);
  SparseMatrix m = SparseMatrix::from_triplets(f, n, n, t);
  for (auto _ : state) benchmark::DoNotOptimize(rank(f, m));
}
BENCHMARK(sparse_rank)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void lifted_lambda2_bench(benchmark::State& state) {
  auto lift = make_lift(static_cast<std::uint32_t>(state.range(0)), 1, 4, 1, 3);
  auto labels = lift.lift_labels();
  for (auto _ : state) benchmark::DoNotOptimize(lifted_lambda2(lift.base(), lift.group(), labels));
}
BENCHMARK(lifted_lambda2_bench)->Arg(11)->Arg(41)->Unit(benchmark::kMillisecond);

void planted_complex(benchmark::State& state) {
  auto lift = make_lift(static_cast<std::uint32_t>(state.range(0)), 1, 8, 1, 4);
  for (auto _ : state) benchmark::DoNotOptimize(rm_planted_complex(lift, 4, 1).complex.dim(1));
}
BENCHMARK(planted_complex)->Arg(11)->Arg(17)->Unit(benchmark::kMillisecond);

void coboundary_invariance(benchmark::State& state) {
  auto fam = build_family(make_lift(41, 1, 40, 1, 808), 2, 20, 1);
  Vec alpha = alpha_slot(fam);
  for (auto _ : state) benchmark::DoNotOptimize(coboundary_invariance_check(fam, alpha, 1ull << 40).ok);
}
BENCHMARK(coboundary_invariance)->Unit(benchmark::kMillisecond);

void cltc_build(benchmark::State& state) {
  auto lift = make_lift(5, 1, 4, 1, 9);
  const auto ell = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_cltc(lift, ell, true).k);
}
BENCHMARK(cltc_build)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void soundness_enumeration(benchmark::State& state) {
  auto inst = build_cltc(make_lift(3, 1, 2, 1, 5), 1, true);
  for (auto _ : state) benchmark::DoNotOptimize(soundness_oracle(inst, 100000000).num);
}
BENCHMARK(soundness_enumeration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
