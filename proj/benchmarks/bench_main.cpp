// Copyright 2026 The qprep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Microbenchmarks for the kernels that dominate optimization wall time:
// single-gate application, full circuit sweeps, tangent construction,
// metric assembly, and eigensolves.

#include <random>

#include <benchmark/benchmark.h>

#include "qprep/eigensolver.hpp"
#include "qprep/qng.hpp"

using namespace qprep;

namespace {

Eigen::VectorXd angles_for(const Ansatz &a, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    Eigen::VectorXd theta(a.parameter_count());
    for (Eigen::Index i = 0; i < theta.size(); ++i)
        theta[i] = dist(rng);
    return theta;
}

void BM_GateExp(benchmark::State &state) {
    const int num_sites = static_cast<int>(state.range(0));
    const PauliKernel bond =
        PauliKernel::compile(PauliString::from_pattern("XX", num_sites / 2, -1.0));
    State psi = product_state(num_sites);
    double theta = 0.001;
    for (auto _ : state) {
        apply_exp_inplace(psi, bond, theta);
        theta += 1e-6; // keep the angle live
        benchmark::DoNotOptimize(psi.amps.data());
    }
    state.SetItemsProcessed(state.iterations() * (int64_t{1} << num_sites));
}
BENCHMARK(BM_GateExp)->Arg(8)->Arg(12)->Arg(16);

void BM_DiagonalGateExp(benchmark::State &state) {
    const int num_sites = static_cast<int>(state.range(0));
    const PauliKernel site =
        PauliKernel::compile(PauliString::from_pattern("Z", num_sites / 2, -1.0));
    State psi = product_state(num_sites);
    for (auto _ : state) {
        apply_exp_inplace(psi, site, 0.001);
        benchmark::DoNotOptimize(psi.amps.data());
    }
    state.SetItemsProcessed(state.iterations() * (int64_t{1} << num_sites));
}
BENCHMARK(BM_DiagonalGateExp)->Arg(12)->Arg(16);

void BM_ApplyCircuit(benchmark::State &state) {
    const int num_sites = static_cast<int>(state.range(0));
    const Ansatz a(build_ising(num_sites, 0.0, 1.0), num_sites / 2);
    const Eigen::VectorXd theta = angles_for(a, 1);
    const State psi0 = product_state(num_sites);
    for (auto _ : state) {
        const State out = apply_circuit(a, theta, psi0);
        benchmark::DoNotOptimize(out.amps.data());
    }
    state.SetItemsProcessed(state.iterations() * a.gates().size());
}
BENCHMARK(BM_ApplyCircuit)->Arg(8)->Arg(12)->Arg(14);

void BM_TangentStates(benchmark::State &state) {
    const int num_sites = static_cast<int>(state.range(0));
    const Ansatz a(build_ising(num_sites, 0.0, 1.0), num_sites / 2);
    const Eigen::VectorXd theta = angles_for(a, 2);
    const State psi0 = product_state(num_sites);
    for (auto _ : state) {
        const auto phis = tangent_states(a, theta, psi0);
        benchmark::DoNotOptimize(phis.data());
    }
    state.SetItemsProcessed(state.iterations() * a.parameter_count());
}
BENCHMARK(BM_TangentStates)->Arg(8)->Arg(10)->Arg(12);

void BM_Metric(benchmark::State &state) {
    const int num_sites = static_cast<int>(state.range(0));
    const Ansatz a(build_ising(num_sites, 0.0, 1.0), num_sites / 2);
    const Eigen::VectorXd theta = angles_for(a, 3);
    const State psi0 = product_state(num_sites);
    const State psi = apply_circuit(a, theta, psi0);
    const auto phis = tangent_states(a, theta, psi0);
    for (auto _ : state) {
        const Eigen::MatrixXd g = metric(phis, psi);
        benchmark::DoNotOptimize(g.data());
    }
    state.SetItemsProcessed(state.iterations() * a.parameter_count() *
                            a.parameter_count());
}
BENCHMARK(BM_Metric)->Arg(8)->Arg(10)->Arg(12);

void BM_SectorEigensolve(benchmark::State &state) {
    const int num_sites = static_cast<int>(state.range(0));
    const HamiltonianSpec spec = build_ising(num_sites, 0.0, 1.0);
    for (auto _ : state) {
        const auto states = eigenstates(spec, 1, 2);
        benchmark::DoNotOptimize(states.data());
    }
}
BENCHMARK(BM_SectorEigensolve)->Arg(8)->Arg(10)->Arg(12)
    ->Unit(benchmark::kMillisecond);

void BM_FullSpaceEigensolve(benchmark::State &state) {
    const int num_sites = static_cast<int>(state.range(0));
    const HamiltonianSpec spec = build_ising(num_sites, 0.06, 1.0);
    for (auto _ : state) {
        const auto states = eigenstates_full(spec, 1);
        benchmark::DoNotOptimize(states.data());
    }
}
BENCHMARK(BM_FullSpaceEigensolve)->Arg(10)->Arg(12)->Arg(14)
    ->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
