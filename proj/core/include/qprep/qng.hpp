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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qprep/circuit.hpp"

namespace qprep {

enum class CostKind { Overlap, Energy };

struct OptimizerConfig {
    double eta = 0.25;
    double epsilon = 0.01;
    double fidelity_cutoff = 0.99;
    int max_iters = 500;
    double init_angle = 0.01;
    /// Random restart: uniform angles in [-amplitude, amplitude] drawn
    /// from the seed, instead of the constant init.
    bool random_init = false;
    std::uint64_t seed = 0;
    double amplitude = 0.1;
    CostKind cost = CostKind::Overlap;
    std::size_t cache_cap_bytes = kDefaultForwardCacheBytes;

    void validate() const;
};

enum class RunStatus { Converged, MaxIters, Stalled };

const char *to_string(RunStatus s);

struct TraceRow {
    int t;
    double cost;
    double fidelity;
    double energy;
    double entropy;
    double grad_norm;
    double step_norm;
};

struct OptimizationTrace {
    std::vector<TraceRow> rows;
    RunStatus status = RunStatus::MaxIters;
    Eigen::VectorXd final_theta;
    int iterations = 0;
    double final_fidelity = 0.0;

    // Worst-case diagnostics across the whole run.
    double max_norm_dev = 0.0;
    double max_charge_dev = 0.0;
    double min_metric_eig = 0.0;
    int epsilon_escalations = 0;
};

/// Tangent states |φ_p⟩: the generator of parameter p inserted at each of
/// its gates (weighted by the gate's angle scale) and carried through the
/// remaining circuit. For single-gate parameters this is exactly "apply
/// K_p before its gate, then the rest of the circuit". Satisfies
/// ⟨ψ|φ_p⟩ real.
std::vector<Eigen::VectorXcd> tangent_states(const Ansatz &a,
                                             const Eigen::VectorXd &theta,
                                             const State &psi0,
                                             std::size_t cache_cap_bytes =
                                                 kDefaultForwardCacheBytes);

/// Fubini-Study metric g = Re[⟨φ_p|φ_q⟩ − ⟨φ_p|ψ⟩⟨ψ|φ_q⟩]; upper triangle
/// computed and mirrored.
Eigen::MatrixXd metric(const std::vector<Eigen::VectorXcd> &phis, const State &psi);

/// Analytic cost gradients. Overlap cost L = −|⟨ψ|ψT⟩|² (summed over a
/// degenerate target block); Energy cost L = ⟨ψ|H|ψ⟩. Signs are frozen
/// against central finite differences.
Eigen::VectorXd grad_cost(CostKind kind, const std::vector<Eigen::VectorXcd> &phis,
                          const State &psi, std::span<const State> target_block,
                          const HamiltonianSpec *spec);

/// Θ′ = Θ − η (g + εI)⁻¹ grad via Cholesky solve. If the shifted metric is
/// not positive definite, ε is escalated once by 10; a second failure
/// aborts. escalations (optional) counts the retries taken.
Eigen::VectorXd qng_step(const Eigen::VectorXd &theta, const Eigen::MatrixXd &g,
                         const Eigen::VectorXd &grad, double eta, double epsilon,
                         int *escalations = nullptr);

/// Fidelity against a (possibly degenerate) target block: |⟨ψT|ψ⟩| for one
/// state, the projector norm sqrt(Σ|⟨b|ψ⟩|²) over a block.
double block_fidelity(const State &psi, std::span<const State> target_block);

/// Natural-gradient descent until the fidelity cutoff, the iteration
/// budget, or a stall (‖ΔΘ‖ < 1e−10 five times in a row). Rejects an
/// initial state whose conserved charges differ from the target's, since
/// the symmetric circuit could never connect them.
OptimizationTrace optimize(const Ansatz &a, const State &psi0,
                           std::span<const State> target_block,
                           const OptimizerConfig &cfg);

inline OptimizationTrace optimize(const Ansatz &a, const State &psi0,
                                  const State &target, const OptimizerConfig &cfg) {
    return optimize(a, psi0, std::span<const State>(&target, 1), cfg);
}

} // namespace qprep
