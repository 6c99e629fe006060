// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "dipolarbus/basis.hpp"
#include "dipolarbus/hamiltonian.hpp"
#include "dipolarbus/krylov.hpp"
#include "dipolarbus/spectral.hpp"

namespace {

using namespace dipolarbus;

DriveParams reference_drive() {
  DriveParams p;
  p.omega0 = 1.0;
  p.delta0 = 2.3;
  p.t0 = 100.0;
  p.c_p = 100.0;
  p.p = 3;
  return p;
}

struct Problem {
  ChainGeometry geometry;
  BasisSet basis;
  SparseHamiltonian h;
};

Problem make_problem(int n) {
  auto g = make_equidistant(n, 3.0);
  auto b = BasisSet::build(g, FullPolicy{});
  const SectorHamiltonian sh(b, g, kSectorUU, reference_drive());
  auto h = sh.at_time(50.0);
  return {std::move(g), std::move(b), std::move(h)};
}

void BM_Matvec(benchmark::State& state) {
  const auto prob = make_problem(static_cast<int>(state.range(0)));
  ComplexVector x(prob.basis.size(), Complex(1.0, 0.0));
  ComplexVector y(prob.basis.size());
  for (auto _ : state) {
    prob.h.apply(std::span<const Complex>(x), std::span<Complex>(y));
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(prob.basis.size()));
}
BENCHMARK(BM_Matvec)->Arg(8)->Arg(10)->Arg(12);

void BM_LowestTwo(benchmark::State& state) {
  const auto prob = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lowest_two(prob.h).e1);
}
BENCHMARK(BM_LowestTwo)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_KrylovStep(benchmark::State& state) {
  const auto prob = make_problem(static_cast<int>(state.range(0)));
  ComplexVector psi(prob.basis.size());
  psi[prob.basis.vacuum_index()] = 1.0;
  KrylovPropagator prop;
  for (auto _ : state) prop.propagate(prob.h, psi, 100.0 / 2048);
}
BENCHMARK(BM_KrylovStep)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
