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

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "qprep/model.hpp"
#include "qprep/pauli.hpp"

namespace qprep {

/// Dense amplitude vector over the computational basis of an L-site chain.
/// Basis index bit j is site j; bit value 0 is the Z-up state. Amplitudes
/// live in one contiguous buffer and are exclusively owned during mutation.
struct State {
    int num_sites = 0;
    Eigen::VectorXcd amps;

    State() = default;
    explicit State(int sites)
        : num_sites(sites),
          amps(Eigen::VectorXcd::Zero(Eigen::Index{1} << sites)) {}

    Eigen::Index dim() const { return amps.size(); }
    double norm() const { return amps.norm(); }
};

/// |↑...↑⟩ with the listed sites flipped down.
State product_state(int num_sites, std::span<const int> flips = {});

/// Mask form of a weighted Pauli string, precompiled for the strided
/// amplitude kernels. flip_mask marks X/Y letters, phase_mask Z/Y letters;
/// the string's action is P|b⟩ = coeff · i^y · (-1)^{popcount(b & phase)}
/// |b ^ flip⟩.
struct PauliKernel {
    std::uint64_t flip_mask = 0;
    std::uint64_t phase_mask = 0;
    int y_count = 0;
    double coeff = 1.0;

    static PauliKernel compile(const PauliString &s);
};

/// In-place ψ ← exp(-iθ·P)·ψ. Strided pair updates over the full buffer;
/// diagonal strings reduce to a phase multiply.
void apply_exp_inplace(Eigen::VectorXcd &amps, const PauliKernel &k, double theta);

inline void apply_exp_inplace(State &psi, const PauliKernel &k, double theta) {
    apply_exp_inplace(psi.amps, k, theta);
}

/// dst += scale · P · src (no aliasing).
void apply_pauli_axpy(Eigen::VectorXcd &dst, const Eigen::VectorXcd &src,
                      const PauliKernel &k, double scale);

inline void apply_pauli_axpy(State &dst, const State &src, const PauliKernel &k,
                             double scale) {
    apply_pauli_axpy(dst.amps, src.amps, k, scale);
}

/// dst ← P·src (dst is overwritten, must not alias src).
void apply_pauli_into(State &dst, const State &src, const PauliKernel &k);

/// ⟨ψ|P|ψ⟩ without scratch storage.
std::complex<double> expectation_kernel(const State &psi, const PauliKernel &k);

/// ψ′ = exp(-iθ·k)·ψ. Functional wrapper over the in-place kernel.
State apply_generator_exp(const State &psi, const PauliString &k, double theta);

/// ψ′ = k·ψ including the real coefficient.
State apply_pauli(const State &psi, const PauliString &k);

/// ⟨φ|ψ⟩ with conjugation on φ.
std::complex<double> overlap(const State &psi, const State &phi);

/// ⟨ψ|H|ψ⟩ summed over every string of the spec; the imaginary residue
/// must stay below 1e-10 and is then discarded.
double expectation(const State &psi, const HamiltonianSpec &spec);

/// ⟨ψ| Q |ψ⟩ for a conserved charge (spin-flip parity or magnetization).
double charge_expectation(const State &psi, SymmetryCharge q);

/// Von Neumann entropy (nats) of the left half after the cut at L/2.
/// Requires even L.
double half_chain_entropy(const State &psi);

} // namespace qprep
