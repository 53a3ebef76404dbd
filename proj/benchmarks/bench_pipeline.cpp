// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "dockscope/density.hpp"
#include "dockscope/filter.hpp"
#include "dockscope/isosurface.hpp"
#include "dockscope/synthetic.hpp"
#include "dockscope/views.hpp"

using namespace dockscope;

namespace {

RawEnsemble make(std::size_t n, std::size_t m) {
  SyntheticOptions o;
  o.configurations = n;
  o.proteins = m;
  o.residues = 120;
  o.atoms_per_residue = 6;
  return synthetic_ensemble(o);
}

void BM_BuildHierarchy(benchmark::State& state) {
  const auto raw = make(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    state.PauseTiming();
    RawEnsemble copy = raw;
    state.ResumeTiming();
    benchmark::DoNotOptimize(build_hierarchy(std::move(copy)));
  }
  state.counters["ccs"] = static_cast<double>(state.range(0));
  state.counters["proteins"] = static_cast<double>(state.range(1));
}
BENCHMARK(BM_BuildHierarchy)
    ->Args({100, 4})->Args({200, 4})->Args({400, 4})
    ->Args({200, 2})->Args({200, 8})
    ->Unit(benchmark::kMillisecond);

void BM_EvaluateAndAggregate(benchmark::State& state) {
  const auto ens = build_hierarchy(make(500, 8));
  FilterQueue q(ens.cc_count());
  ResolveContext ctx{ens};
  add_filter(q, ctx, FilterKind::remove_complement, PairContact{{ens.ppes()[0].pair}});
  add_filter(q, ctx, FilterKind::range, PropertyRange{Level::cc, "score", -1e9, 0});
  const int disabled = add_filter(q, ctx, FilterKind::remove, AapKeys{{ens.aaps()[0].key}});
  q.set_enabled(disabled, false);
  for (auto _ : state) {
    auto vis = evaluate(q);
    benchmark::DoNotOptimize(overview_model(ens, vis.visible, BarScaling::independent));
  }
}
BENCHMARK(BM_EvaluateAndAggregate)->Unit(benchmark::kMicrosecond);

void BM_Density(benchmark::State& state) {
  const auto ens = build_hierarchy(make(100, 3));
  DensityParams p;
  p.spacing = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(compute_density(ens, 0, ens.all_ccs(), p));
}
BENCHMARK(BM_Density)->Arg(20)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Isosurface(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double spacing = 32.0 / n;
  std::vector<KernelAtom> atoms{{Vec3(-4, 0, 0), 5.0}, {Vec3(4, 1, 0), 4.0}};
  const GridSpec grid{Vec3::Constant(-16.0), spacing, {n, n, n}};
  const auto field = evaluate_density(atoms, grid);
  for (auto _ : state) benchmark::DoNotOptimize(extract_isosurface(field, 0.3));
  state.counters["grid"] = n;
}
BENCHMARK(BM_Isosurface)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
