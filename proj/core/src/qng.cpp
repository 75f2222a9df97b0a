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

#include "qprep/qng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qprep {

void OptimizerConfig::validate() const {
    if (!(eta > 0.0))
        throw std::invalid_argument("OptimizerConfig: eta must be positive");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("OptimizerConfig: epsilon must be positive");
    if (!(fidelity_cutoff > 0.0 && fidelity_cutoff < 1.0))
        throw std::invalid_argument("OptimizerConfig: cutoff must be in (0, 1)");
    if (max_iters < 1)
        throw std::invalid_argument("OptimizerConfig: max_iters must be positive");
    if (amplitude < 0.0)
        throw std::invalid_argument("OptimizerConfig: amplitude must be nonnegative");
}

const char *to_string(RunStatus s) {
    switch (s) {
    case RunStatus::Converged:
        return "converged";
    case RunStatus::MaxIters:
        return "max_iters";
    case RunStatus::Stalled:
        return "stalled";
    }
    return "unknown";
}

namespace {

void apply_gate_to(const Ansatz &a, const Eigen::VectorXd &theta, int k,
                   Eigen::VectorXcd &amps) {
    const GateOp &gate = a.gates()[k];
    const double angle = gate.scale * theta[gate.param];
    for (const auto &kern : a.terms()[gate.term].kernels)
        apply_exp_inplace(amps, kern, angle);
}

void insert_generator(const Ansatz &a, int k, const Eigen::VectorXcd &before,
                      Eigen::VectorXcd &phi) {
    const GateOp &gate = a.gates()[k];
    for (const auto &kern : a.terms()[gate.term].kernels)
        apply_pauli_axpy(phi, before, kern, gate.scale);
}

std::vector<Eigen::VectorXcd> tangents_from_cache(const Ansatz &a,
                                                  const Eigen::VectorXd &theta,
                                                  const ForwardCache &cache) {
    const int pcount = a.parameter_count();
    const int gate_count = static_cast<int>(a.gates().size());
    std::vector<Eigen::VectorXcd> phis(pcount);
    for (int p = 0; p < pcount; ++p) {
        // φ ← U_k (φ + s_k K_p ψ_k) over every gate k from the first gate
        // of p; the insertion at each owned gate uses the cached prefix.
        const auto &gate_ids = a.gates_of(p);
        Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(cache.final_state.dim());
        std::size_t next_own = 0;
        for (int k = gate_ids.front(); k < gate_count; ++k) {
            if (next_own < gate_ids.size() && gate_ids[next_own] == k) {
                insert_generator(a, k, cache.before_gate[k], phi);
                ++next_own;
            }
            apply_gate_to(a, theta, k, phi);
        }
        phis[p] = std::move(phi);
    }
    return phis;
}

// Streamed fallback: no per-gate cache; replays the forward evolution per
// parameter. Costs roughly one extra forward sweep per parameter but only
// three working buffers.
std::vector<Eigen::VectorXcd> tangents_streamed(const Ansatz &a,
                                                const Eigen::VectorXd &theta,
                                                const State &psi0) {
    const int pcount = a.parameter_count();
    const int gate_count = static_cast<int>(a.gates().size());
    std::vector<Eigen::VectorXcd> phis(pcount);

    // Parameters ordered by first gate so the shared prefix advances once.
    std::vector<int> order(pcount);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return a.first_gate(x) < a.first_gate(y);
    });

    Eigen::VectorXcd prefix = psi0.amps;
    int prefix_pos = 0;
    for (const int p : order) {
        const auto &gate_ids = a.gates_of(p);
        const int start = gate_ids.front();
        const int last_own = gate_ids.back();
        while (prefix_pos < start)
            apply_gate_to(a, theta, prefix_pos++, prefix);

        Eigen::VectorXcd fwd = prefix;
        Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(prefix.size());
        std::size_t next_own = 0;
        for (int k = start; k < gate_count; ++k) {
            if (next_own < gate_ids.size() && gate_ids[next_own] == k) {
                insert_generator(a, k, fwd, phi);
                ++next_own;
            }
            apply_gate_to(a, theta, k, phi);
            if (k < last_own)
                apply_gate_to(a, theta, k, fwd);
        }
        phis[p] = std::move(phi);
    }
    return phis;
}

Eigen::VectorXcd overlaps_with(const std::vector<Eigen::VectorXcd> &phis,
                               const Eigen::VectorXcd &psi) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(phis.size()));
    for (std::size_t p = 0; p < phis.size(); ++p)
        v[static_cast<Eigen::Index>(p)] = psi.dot(phis[p]);
    return v;
}

} // namespace

std::vector<Eigen::VectorXcd> tangent_states(const Ansatz &a,
                                             const Eigen::VectorXd &theta,
                                             const State &psi0,
                                             std::size_t cache_cap_bytes) {
    try {
        const ForwardCache cache = forward_states(a, theta, psi0, cache_cap_bytes);
        return tangents_from_cache(a, theta, cache);
    } catch (const ForwardCacheOverflow &) {
        return tangents_streamed(a, theta, psi0);
    }
}

Eigen::MatrixXd metric(const std::vector<Eigen::VectorXcd> &phis, const State &psi) {
    const int pcount = static_cast<int>(phis.size());
    const Eigen::VectorXcd v = overlaps_with(phis, psi.amps);
    Eigen::MatrixXd g(pcount, pcount);
    for (int p = 0; p < pcount; ++p) {
        for (int q = p; q < pcount; ++q) {
            const std::complex<double> gram = phis[p].dot(phis[q]);
            const std::complex<double> geo = gram - std::conj(v[p]) * v[q];
            g(p, q) = geo.real();
            g(q, p) = geo.real();
        }
    }
    return g;
}

Eigen::VectorXd grad_cost(CostKind kind, const std::vector<Eigen::VectorXcd> &phis,
                          const State &psi, std::span<const State> target_block,
                          const HamiltonianSpec *spec) {
    const int pcount = static_cast<int>(phis.size());
    Eigen::VectorXd grad(pcount);
    if (kind == CostKind::Energy) {
        if (!spec)
            throw std::invalid_argument("grad_cost: energy cost needs a Hamiltonian");
        State hpsi(psi.num_sites);
        for (const auto &s : spec->all_strings())
            apply_pauli_axpy(hpsi, psi, PauliKernel::compile(s), 1.0);
        for (int p = 0; p < pcount; ++p)
            grad[p] = -2.0 * phis[p].dot(hpsi.amps).imag();
        return grad;
    }
    if (target_block.empty())
        throw std::invalid_argument("grad_cost: overlap cost needs a target");
    grad.setZero();
    for (const auto &target : target_block) {
        // d/dΘ of −|⟨ψ|ψT⟩|²; the factor ⟨ψT|ψ⟩ carries the final state.
        const std::complex<double> c0 = psi.amps.dot(target.amps);
        for (int p = 0; p < pcount; ++p)
            grad[p] += 2.0 * (phis[p].dot(target.amps) * std::conj(c0)).imag();
    }
    return grad;
}

Eigen::VectorXd qng_step(const Eigen::VectorXd &theta, const Eigen::MatrixXd &g,
                         const Eigen::VectorXd &grad, double eta, double epsilon,
                         int *escalations) {
    if (g.rows() != theta.size() || g.cols() != theta.size() ||
        grad.size() != theta.size())
        throw std::invalid_argument("qng_step: dimension mismatch");
    if (escalations)
        *escalations = 0;
    double eps = epsilon;
    for (int attempt = 0; attempt < 2; ++attempt) {
        Eigen::MatrixXd shifted = g;
        shifted.diagonal().array() += eps;
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success)
            return theta - eta * llt.solve(grad);
        if (escalations)
            ++*escalations;
        eps *= 10.0;
    }
    throw std::runtime_error("qng_step: metric not positive definite after "
                             "regularization escalation");
}

double block_fidelity(const State &psi, std::span<const State> target_block) {
    double acc = 0.0;
    for (const auto &t : target_block)
        acc += std::norm(overlap(psi, t));
    return std::sqrt(acc);
}

namespace {

Eigen::VectorXd initial_angles(int pcount, const OptimizerConfig &cfg) {
    Eigen::VectorXd theta(pcount);
    if (!cfg.random_init) {
        theta.setConstant(cfg.init_angle);
        return theta;
    }
    std::mt19937_64 rng(cfg.seed);
    for (int p = 0; p < pcount; ++p) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        theta[p] = cfg.amplitude * (2.0 * u - 1.0);
    }
    return theta;
}

void check_sector_compatibility(const Ansatz &a, const State &psi0,
                                std::span<const State> target_block) {
    for (const auto &q : a.spec().declared_symmetries) {
        const double q0 = charge_expectation(psi0, q);
        for (const auto &t : target_block) {
            const double qt = charge_expectation(t, q);
            if (std::abs(q0 - qt) > 1e-6)
                throw std::invalid_argument(
                    "optimize: initial state and target lie in different "
                    "symmetry sectors");
        }
    }
}

} // namespace

OptimizationTrace optimize(const Ansatz &a, const State &psi0,
                           std::span<const State> target_block,
                           const OptimizerConfig &cfg) {
    cfg.validate();
    if (target_block.empty())
        throw std::invalid_argument("optimize: empty target block");
    for (const auto &t : target_block)
        if (t.num_sites != a.spec().num_sites)
            throw std::invalid_argument("optimize: target size mismatch");
    check_sector_compatibility(a, psi0, target_block);

    const int pcount = a.parameter_count();
    const bool even = a.spec().num_sites % 2 == 0;
    Eigen::VectorXd theta = initial_angles(pcount, cfg);

    OptimizationTrace trace;
    trace.min_metric_eig = std::numeric_limits<double>::infinity();
    int stall_count = 0;

    for (int t = 0;; ++t) {
        EvolutionStats stats;
        ForwardCache cache;
        bool cached = true;
        State psi;
        try {
            cache = forward_states(a, theta, psi0, cfg.cache_cap_bytes, &stats);
            psi = cache.final_state;
        } catch (const ForwardCacheOverflow &) {
            cached = false;
            psi = apply_circuit(a, theta, psi0, &stats);
        }
        trace.max_norm_dev = std::max(trace.max_norm_dev, stats.max_norm_dev);
        trace.max_charge_dev = std::max(trace.max_charge_dev, stats.max_charge_dev);

        const double fidelity = block_fidelity(psi, target_block);
        const double energy = expectation(psi, a.spec());
        const double entropy =
            even ? half_chain_entropy(psi) : std::numeric_limits<double>::quiet_NaN();
        double cost;
        if (cfg.cost == CostKind::Overlap)
            cost = -fidelity * fidelity;
        else
            cost = energy;

        TraceRow row{t, cost, fidelity, energy, entropy, 0.0, 0.0};

        if (fidelity >= cfg.fidelity_cutoff) {
            trace.rows.push_back(row);
            trace.status = RunStatus::Converged;
            break;
        }
        if (t == cfg.max_iters) {
            trace.rows.push_back(row);
            trace.status = RunStatus::MaxIters;
            break;
        }

        const std::vector<Eigen::VectorXcd> phis =
            cached ? tangents_from_cache(a, theta, cache)
                   : tangents_streamed(a, theta, psi0);
        const Eigen::MatrixXd g = metric(phis, psi);
        {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                g, Eigen::EigenvaluesOnly);
            trace.min_metric_eig =
                std::min(trace.min_metric_eig, es.eigenvalues().minCoeff());
        }
        const Eigen::VectorXd grad =
            grad_cost(cfg.cost, phis, psi,
                      cfg.cost == CostKind::Overlap ? target_block
                                                    : std::span<const State>{},
                      &a.spec());
        int esc = 0;
        const Eigen::VectorXd next = qng_step(theta, g, grad, cfg.eta, cfg.epsilon, &esc);
        trace.epsilon_escalations += esc;

        row.grad_norm = grad.norm();
        row.step_norm = (next - theta).norm();
        trace.rows.push_back(row);

        if (row.step_norm < 1e-10) {
            if (++stall_count >= 5) {
                trace.status = RunStatus::Stalled;
                break;
            }
        } else {
            stall_count = 0;
        }
        theta = next;
    }

    trace.final_theta = theta;
    trace.iterations = trace.rows.back().t;
    trace.final_fidelity = trace.rows.back().fidelity;
    if (!std::isfinite(trace.min_metric_eig))
        trace.min_metric_eig = std::numeric_limits<double>::quiet_NaN();
    return trace;
}

} // namespace qprep
