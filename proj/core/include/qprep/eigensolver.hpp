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
#include <optional>
#include <vector>

#include "qprep/model.hpp"
#include "qprep/state.hpp"

namespace qprep {

/// An exact eigenpair used as the preparation target. sector_charge is the
/// spin-flip parity eigenvalue when the state was sector-resolved, empty
/// for full-spectrum solves. States with a neighbouring level closer than
/// 1e-10 are flagged degenerate; fidelity against such a state should be
/// evaluated over the whole degenerate block.
struct TargetState {
    State state;
    double energy = 0.0;
    std::optional<int> sector_charge;
    int index_in_sector = 0;
    bool degenerate = false;
};

/// Basis indices with even (q=+1) or odd (q=-1) bit-population parity.
std::vector<std::uint64_t> sector_indices(int num_sites, int q);

/// k lowest eigenpairs of the spin-flip parity sector q, ascending energy,
/// embedded back into the full 2^L space. Requires a spec that conserves
/// ProductZ. Dense diagonalization below a dimension threshold, deflated
/// Lanczos above it; either way the residual bound 1e-9 is enforced and
/// the phase is fixed by making the largest-modulus amplitude real
/// positive.
std::vector<TargetState> eigenstates(const HamiltonianSpec &spec, int q, int k);

/// k lowest eigenpairs over the full space, for Hamiltonians that conserve
/// no declared charge (e.g. the Ising chain with both fields on).
std::vector<TargetState> eigenstates_full(const HamiltonianSpec &spec, int k);

/// All eigenvalues of the dense Hamiltonian, ascending. Test oracle only;
/// the usual dense site limit applies.
std::vector<double> dense_spectrum(const HamiltonianSpec &spec);

/// Correlation length (lattice units) of the Ising ground state at the
/// given fields, from a least-squares exponential fit of the connected
/// X-X correlator measured at centered pairs away from the boundary.
/// Requires lambda_x > 0 (gapped phase). Throws if fewer than 3 usable
/// fit points remain.
double correlation_length(double lambda_x, double lambda_z, int num_sites);

} // namespace qprep
