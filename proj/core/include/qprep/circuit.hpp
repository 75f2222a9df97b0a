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

#include <filesystem>
#include <stdexcept>
#include <vector>

#include "qprep/model.hpp"
#include "qprep/state.hpp"

namespace qprep {

struct AnsatzOptions {
    /// Trotter order for groups whose strings do not all commute.
    int trotter_order = 2;
    /// Translation-invariant variant: one shared angle per group per layer
    /// instead of per-site angles.
    bool tie_angles = false;
};

/// One applied rotation: exp(-i · scale · θ[param] · K[term]).
struct GateOp {
    int param;
    int term;
    double scale;
};

/// Layout key of a flat parameter index. layer is 0-based; variant
/// disambiguates multiple terms anchored at the same site within a group
/// (the three-body family has two). site and variant are -1 for tied
/// parameters.
struct ParameterKey {
    int layer;
    int group;
    int site;
    int variant;

    bool operator==(const ParameterKey &) const = default;
};

/// Layered circuit mirroring the Hamiltonian grouping: each layer applies
/// one sublayer per group, nearest-neighbour first, then on-site, then
/// next-nearest-neighbour; within a sublayer, terms in ascending site
/// order. Non-commuting sublayers are expanded by the symmetric Trotter
/// split (ascending half angles, then descending half angles).
class Ansatz {
  public:
    struct CompiledTerm {
        int group;
        int site;
        int variant;
        std::vector<PauliKernel> kernels;
    };

    Ansatz(HamiltonianSpec spec, int layers, AnsatzOptions opts = {});

    const HamiltonianSpec &spec() const { return spec_; }
    int layers() const { return layers_; }
    const AnsatzOptions &options() const { return opts_; }
    int parameter_count() const { return static_cast<int>(params_.size()); }

    const std::vector<GateOp> &gates() const { return gates_; }
    const std::vector<CompiledTerm> &terms() const { return terms_; }
    const std::vector<ParameterKey> &parameter_keys() const { return params_; }

    /// Reverse layout lookup; throws on an unknown key.
    int parameter_index(const ParameterKey &key) const;

    /// Gate positions using parameter p, ascending. One entry except under
    /// Trotter splits or tied angles.
    const std::vector<int> &gates_of(int param) const { return param_gates_[param]; }
    int first_gate(int param) const { return param_gates_[param].front(); }

    /// Gate range [begin, end) forming layer l.
    std::pair<int, int> layer_gate_range(int layer) const;

    /// Gate indices at which each sublayer ends (exclusive), in order.
    const std::vector<int> &sublayer_ends() const { return sublayer_ends_; }

    /// Group indices in sublayer application order.
    const std::vector<int> &group_order() const { return group_order_; }

  private:
    HamiltonianSpec spec_;
    int layers_;
    AnsatzOptions opts_;
    std::vector<int> group_order_;
    std::vector<CompiledTerm> terms_;
    std::vector<GateOp> gates_;
    std::vector<ParameterKey> params_;
    std::vector<std::vector<int>> param_gates_;
    std::vector<int> layer_starts_;
    std::vector<int> sublayer_ends_;
};

/// Per-sublayer conservation diagnostics accumulated along a forward pass.
struct EvolutionStats {
    double max_norm_dev = 0.0;
    double max_charge_dev = 0.0;
};

/// ψ(Θ) = (last gate) ... (first gate) ψ0. When stats is given, the norm
/// and every declared charge are measured after each sublayer and their
/// worst drifts recorded.
State apply_circuit(const Ansatz &a, const Eigen::VectorXd &theta, const State &psi0,
                    EvolutionStats *stats = nullptr);

/// Expands one group sublayer into (term ordinal, angle) pairs. Commuting
/// groups apply terms in ascending order at full angles for any order;
/// non-commuting groups use the requested Trotter order.
std::vector<std::pair<int, double>>
trotter_sublayer(const TermGroup &group, std::span<const double> thetas, int order);

inline constexpr std::size_t kDefaultForwardCacheBytes =
    std::size_t{2} * 1024 * 1024 * 1024;

/// Thrown when the forward cache would exceed its memory budget; callers
/// fall back to streamed recomputation.
struct ForwardCacheOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Forward evolution with the state before every gate retained, plus the
/// final state. The state at a parameter's insertion point is the one
/// before its first gate.
struct ForwardCache {
    std::vector<Eigen::VectorXcd> before_gate;
    State final_state;

    const Eigen::VectorXcd &before_param(const Ansatz &a, int param) const {
        return before_gate[a.first_gate(param)];
    }
};

ForwardCache forward_states(const Ansatz &a, const Eigen::VectorXd &theta,
                            const State &psi0,
                            std::size_t memory_cap_bytes = kDefaultForwardCacheBytes,
                            EvolutionStats *stats = nullptr);

struct ProfileRow {
    int layer;
    double fidelity;
    double energy;
    double entropy;
};

/// Fidelity, energy and half-chain entropy after each full layer of the
/// optimized circuit. Entropy is NaN for odd chains.
std::vector<ProfileRow> layer_profile(const Ansatz &a, const Eigen::VectorXd &theta,
                                      const State &psi0, const State &psi_target);

/// Angle persistence. The JSON layout lists one entry per parameter in
/// layout order with 1-based layer indices; doubles survive the round
/// trip bit-exactly.
void save_angles(const std::filesystem::path &path, const Ansatz &a,
                 const Eigen::VectorXd &theta);
Eigen::VectorXd load_angles(const std::filesystem::path &path, const Ansatz &a);

} // namespace qprep
