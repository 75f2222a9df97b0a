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
#include <optional>
#include <string>
#include <vector>

#include "qprep/eigensolver.hpp"
#include "qprep/qng.hpp"

namespace qprep {

/// Sentinel sector meaning "pick +1 when spin-flip parity is conserved,
/// otherwise target the full spectrum".
inline constexpr int kSectorAuto = 2;

/// Accepts "auto", "full", "+1", "1", "-1", or "0".
int parse_sector(const std::string &text);

/// Accepts "by_pauli" or "u1".
XxzGrouping parse_grouping(const std::string &text);
const char *to_string(XxzGrouping g);

/// One experiment description: model, couplings, target selection,
/// ansatz depth (single or swept), and optimizer knobs. Loadable from a
/// JSON file; command-line flags override individual fields.
struct RunConfig {
    std::string model = "ising"; // ising | tci | xxz
    int size = 8;

    double lambda_x = 0.0;
    double lambda_z = 1.0;
    double lambda_zxx = 0.428;
    double gamma = 0.5; // XXZ anisotropy angle, cos(gamma) multiplies ZZ
    XxzGrouping grouping = XxzGrouping::ByPauli;

    /// +1 / -1: spin-flip parity block (model must conserve it).
    /// 0: full spectrum. kSectorAuto: +1 if conserved, else 0.
    int sector = kSectorAuto;
    int state_index = 0;

    int layers = 1;
    /// Inclusive depth range for sweep-layers; 0 means "choose per size".
    int layer_min = 0;
    int layer_max = 0;
    std::vector<int> sizes;          // sweep-size
    std::vector<double> lambda_x_list; // sweep-coupling

    OptimizerConfig opt;
    int trotter_order = 2;
    bool tie_angles = false;

    /// Extra optimization attempts with random initial angles after a
    /// non-converged deterministic attempt. -1: 2 for excited states,
    /// 0 for ground states.
    int restarts = -1;

    /// Stop a layer sweep at the first converged depth. N_c is unchanged;
    /// deeper rows are simply not computed.
    bool early_stop = true;

    int levels = 2; // eigenvalues per sector in the spectrum dump

    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "qprep-out";

    void validate() const;
};

/// Parses a JSON config file. Unknown keys are rejected.
RunConfig load_config(const std::filesystem::path &path);

/// Builds the Hamiltonian described by the config.
HamiltonianSpec build_model(const RunConfig &cfg);

/// Resolves the sector request against the model's symmetries.
/// Returns the parity block to target, or nullopt for the full spectrum.
std::optional<int> resolve_sector(const HamiltonianSpec &spec, int sector);

/// Target selection plus the matching initial product state: no flips in
/// the +1 (or full-spectrum) case, one flip at site floor(L/2) for -1.
struct Problem {
    HamiltonianSpec spec;
    std::optional<int> sector;
    int state_index = 0;
    State psi0;
    /// Every eigenstate sharing the target energy (size 1 when the level
    /// is non-degenerate).
    std::vector<State> target_block;
    double target_energy = 0.0;
    double target_entropy = 0.0; // NaN for odd sizes
    bool degenerate = false;
};

Problem setup_problem(const RunConfig &cfg);

/// Optimization at fixed depth with the restart policy applied. The best
/// attempt (first converged, else highest fidelity) is kept.
struct AttemptResult {
    OptimizationTrace trace;
    int attempts = 1;
};

AttemptResult optimize_with_restarts(const Ansatz &ansatz, const Problem &prob,
                                     const RunConfig &cfg);

struct PrepareResult {
    Problem problem;
    int layers = 0;
    int parameter_count = 0;
    OptimizationTrace trace;
    int attempts = 1;
    std::vector<ProfileRow> profile;
    double final_energy = 0.0;
    double final_entropy = 0.0; // NaN for odd sizes
    double wall_seconds = 0.0;
};

PrepareResult run_prepare(const RunConfig &cfg);

struct LayerSweepRow {
    int layers = 0;
    int parameter_count = 0;
    RunStatus status = RunStatus::MaxIters;
    int iterations = 0;
    double fidelity = 0.0;
    double energy_error = 0.0;
    int attempts = 1;
};

struct LayerSweepResult {
    std::vector<LayerSweepRow> rows;
    /// Minimal converged depth; -1 when no depth in range converged.
    int n_c = -1;
    double max_norm_dev = 0.0;
    double max_charge_dev = 0.0;
    double wall_seconds = 0.0;
};

LayerSweepResult run_sweep_layers(const RunConfig &cfg);

struct SizeSweepRow {
    int size = 0;
    int n_c = -1;
    double fidelity = 0.0; // at n_c, or best tried when unconverged
};

struct SizeSweepResult {
    std::vector<SizeSweepRow> rows;
    double max_norm_dev = 0.0;
    double max_charge_dev = 0.0;
    double wall_seconds = 0.0;
};

SizeSweepResult run_sweep_size(const RunConfig &cfg);

struct CouplingSweepRow {
    double lambda_x = 0.0;
    double xi = 0.0; // exact-diagonalization correlation length
    int n_c = -1;
    double fidelity = 0.0;
};

struct CouplingSweepResult {
    std::vector<CouplingSweepRow> rows;
    double max_norm_dev = 0.0;
    double max_charge_dev = 0.0;
    double wall_seconds = 0.0;
};

CouplingSweepResult run_sweep_coupling(const RunConfig &cfg);

struct SpectrumRow {
    std::optional<int> sector;
    int index = 0;
    double energy = 0.0;
    bool degenerate = false;
};

/// Lowest `levels` states per parity sector (or of the full spectrum when
/// parity is not conserved), merged in ascending energy order.
std::vector<SpectrumRow> run_spectrum(const RunConfig &cfg);

/// Replaces `path` with `text` via a temporary file and rename, so
/// readers never observe a partial file.
void write_file_atomic(const std::filesystem::path &path, const std::string &text);

/// File emission for the CLI: each writes into cfg.out_dir and returns
/// the computed result.
PrepareResult cmd_prepare(const RunConfig &cfg);
LayerSweepResult cmd_sweep_layers(const RunConfig &cfg);
SizeSweepResult cmd_sweep_size(const RunConfig &cfg);
CouplingSweepResult cmd_sweep_coupling(const RunConfig &cfg);
std::vector<SpectrumRow> cmd_spectrum(const RunConfig &cfg);

} // namespace qprep
