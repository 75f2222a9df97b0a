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

#include "qprep/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qprep {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Eigenstates closer in energy than this are treated as one degenerate
// block for fidelity purposes.
constexpr double kBlockEnergyTol = 1e-10;

int default_layer_cap(int size) { return size / 2 + 2; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    const auto dt = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration<double>(dt).count();
}

CostKind parse_cost(const std::string &text) {
    if (text == "overlap")
        return CostKind::Overlap;
    if (text == "energy")
        return CostKind::Energy;
    throw std::invalid_argument("config: cost must be overlap or energy");
}

const char *to_string(CostKind c) {
    return c == CostKind::Overlap ? "overlap" : "energy";
}

} // namespace

XxzGrouping parse_grouping(const std::string &text) {
    if (text == "by_pauli")
        return XxzGrouping::ByPauli;
    if (text == "u1")
        return XxzGrouping::U1;
    throw std::invalid_argument("config: grouping must be by_pauli or u1");
}

const char *to_string(XxzGrouping g) {
    return g == XxzGrouping::ByPauli ? "by_pauli" : "u1";
}

int parse_sector(const std::string &text) {
    if (text == "auto")
        return kSectorAuto;
    if (text == "full" || text == "0")
        return 0;
    if (text == "+1" || text == "1")
        return 1;
    if (text == "-1")
        return -1;
    throw std::invalid_argument("config: sector must be auto, full, +1, -1, or 0");
}

void RunConfig::validate() const {
    if (model != "ising" && model != "tci" && model != "xxz")
        throw std::invalid_argument("config: model must be ising, tci, or xxz");
    if (size < 2 || size > 24)
        throw std::invalid_argument("config: size must be between 2 and 24");
    for (double c : {lambda_x, lambda_z, lambda_zxx, gamma})
        if (!std::isfinite(c))
            throw std::invalid_argument("config: couplings must be finite");
    if (sector != kSectorAuto && sector != -1 && sector != 0 && sector != 1)
        throw std::invalid_argument("config: sector must be auto, +1, -1, or 0");
    if (state_index < 0)
        throw std::invalid_argument("config: state index must be nonnegative");
    if (layers < 1)
        throw std::invalid_argument("config: layers must be positive");
    if (layer_min < 0 || layer_max < 0)
        throw std::invalid_argument("config: layer range bounds must be nonnegative");
    if (layer_min > 0 && layer_max > 0 && layer_min > layer_max)
        throw std::invalid_argument("config: empty layer range");
    for (int s : sizes)
        if (s < 2 || s > 24)
            throw std::invalid_argument("config: swept sizes must be between 2 and 24");
    for (double lx : lambda_x_list)
        if (!std::isfinite(lx))
            throw std::invalid_argument("config: swept couplings must be finite");
    if (trotter_order != 1 && trotter_order != 2)
        throw std::invalid_argument("config: trotter order must be 1 or 2");
    if (restarts < -1)
        throw std::invalid_argument("config: restarts must be -1 (auto) or >= 0");
    if (levels < 1)
        throw std::invalid_argument("config: levels must be positive");
    opt.validate();
}

namespace {

void apply_config_json(RunConfig &cfg, const json &j) {
    if (!j.is_object())
        throw std::invalid_argument("config: top level must be a JSON object");
    for (const auto &[key, value] : j.items()) {
        try {
            if (key == "model")
                cfg.model = value.get<std::string>();
            else if (key == "size")
                cfg.size = value.get<int>();
            else if (key == "lambda_x")
                cfg.lambda_x = value.get<double>();
            else if (key == "lambda_z")
                cfg.lambda_z = value.get<double>();
            else if (key == "lambda_zxx")
                cfg.lambda_zxx = value.get<double>();
            else if (key == "gamma")
                cfg.gamma = value.get<double>();
            else if (key == "grouping")
                cfg.grouping = parse_grouping(value.get<std::string>());
            else if (key == "sector")
                cfg.sector = value.is_string() ? parse_sector(value.get<std::string>())
                                               : value.get<int>();
            else if (key == "state_index")
                cfg.state_index = value.get<int>();
            else if (key == "layers")
                cfg.layers = value.get<int>();
            else if (key == "layer_min")
                cfg.layer_min = value.get<int>();
            else if (key == "layer_max")
                cfg.layer_max = value.get<int>();
            else if (key == "sizes")
                cfg.sizes = value.get<std::vector<int>>();
            else if (key == "lambda_x_list")
                cfg.lambda_x_list = value.get<std::vector<double>>();
            else if (key == "eta")
                cfg.opt.eta = value.get<double>();
            else if (key == "epsilon")
                cfg.opt.epsilon = value.get<double>();
            else if (key == "cutoff")
                cfg.opt.fidelity_cutoff = value.get<double>();
            else if (key == "max_iters")
                cfg.opt.max_iters = value.get<int>();
            else if (key == "init_angle")
                cfg.opt.init_angle = value.get<double>();
            else if (key == "random_init")
                cfg.opt.random_init = value.get<bool>();
            else if (key == "amplitude")
                cfg.opt.amplitude = value.get<double>();
            else if (key == "cost")
                cfg.opt.cost = parse_cost(value.get<std::string>());
            else if (key == "trotter_order")
                cfg.trotter_order = value.get<int>();
            else if (key == "tie_angles")
                cfg.tie_angles = value.get<bool>();
            else if (key == "restarts")
                cfg.restarts = value.get<int>();
            else if (key == "early_stop")
                cfg.early_stop = value.get<bool>();
            else if (key == "levels")
                cfg.levels = value.get<int>();
            else if (key == "seed")
                cfg.seed = value.get<std::uint64_t>();
            else if (key == "out")
                cfg.out_dir = value.get<std::string>();
            else
                throw std::invalid_argument("config: unknown key \"" + key + "\"");
        } catch (const json::exception &e) {
            throw std::invalid_argument("config: bad value for \"" + key +
                                        "\": " + e.what());
        }
    }
}

} // namespace

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw std::invalid_argument("config: " + path.string() + ": " + e.what());
    }
    RunConfig cfg;
    apply_config_json(cfg, j);
    return cfg;
}

HamiltonianSpec build_model(const RunConfig &cfg) {
    if (cfg.model == "ising")
        return build_ising(cfg.size, cfg.lambda_x, cfg.lambda_z);
    if (cfg.model == "tci")
        return build_tci(cfg.size, cfg.lambda_z, cfg.lambda_zxx);
    if (cfg.model == "xxz")
        return build_xxz(cfg.size, cfg.gamma, cfg.grouping);
    throw std::invalid_argument("config: model must be ising, tci, or xxz");
}

std::optional<int> resolve_sector(const HamiltonianSpec &spec, int sector) {
    const bool parity = spec.conserves(SymmetryCharge::ProductZ);
    if (sector == kSectorAuto)
        return parity ? std::optional<int>(1) : std::nullopt;
    if (sector == 0)
        return std::nullopt;
    if (!parity)
        throw std::invalid_argument(
            "config: the requested couplings do not conserve spin-flip parity; "
            "use sector=full");
    return sector;
}

Problem setup_problem(const RunConfig &cfg) {
    cfg.validate();
    Problem prob;
    prob.spec = build_model(cfg);
    prob.sector = resolve_sector(prob.spec, cfg.sector);
    prob.state_index = cfg.state_index;

    const Eigen::Index sector_dim =
        prob.sector
            ? static_cast<Eigen::Index>(sector_indices(cfg.size, *prob.sector).size())
            : (Eigen::Index{1} << cfg.size);
    if (cfg.state_index >= sector_dim)
        throw std::invalid_argument("config: state index outside the sector");

    // One extra level above the request exposes a degenerate partner.
    const int k = static_cast<int>(
        std::min<Eigen::Index>(Eigen::Index{cfg.state_index} + 2, sector_dim));
    std::vector<TargetState> targets = prob.sector
                                           ? eigenstates(prob.spec, *prob.sector, k)
                                           : eigenstates_full(prob.spec, k);

    const TargetState &chosen = targets[static_cast<std::size_t>(cfg.state_index)];
    prob.target_energy = chosen.energy;
    prob.target_entropy = (cfg.size % 2 == 0)
                              ? half_chain_entropy(chosen.state)
                              : std::numeric_limits<double>::quiet_NaN();
    prob.degenerate = chosen.degenerate;
    for (auto &t : targets)
        if (std::abs(t.energy - prob.target_energy) <= kBlockEnergyTol)
            prob.target_block.push_back(std::move(t.state));

    if (prob.sector && *prob.sector == -1) {
        const std::vector<int> flips{cfg.size / 2};
        prob.psi0 = product_state(cfg.size, flips);
    } else {
        prob.psi0 = product_state(cfg.size);
    }
    return prob;
}

AttemptResult optimize_with_restarts(const Ansatz &ansatz, const Problem &prob,
                                     const RunConfig &cfg) {
    const bool excited =
        prob.state_index > 0 || (prob.sector && *prob.sector == -1);
    const int allowed = cfg.restarts >= 0 ? cfg.restarts : (excited ? 2 : 0);

    OptimizerConfig base = cfg.opt;
    base.seed = cfg.seed;

    AttemptResult best;
    bool have = false;
    for (int a = 0; a <= allowed; ++a) {
        OptimizerConfig oc = base;
        if (a > 0) {
            oc.random_init = true;
            oc.seed = cfg.seed + static_cast<std::uint64_t>(a);
        }
        OptimizationTrace trace =
            optimize(ansatz, prob.psi0, std::span<const State>(prob.target_block), oc);
        if (!have || trace.final_fidelity > best.trace.final_fidelity) {
            best.trace = std::move(trace);
            have = true;
        }
        best.attempts = a + 1;
        if (best.trace.status == RunStatus::Converged)
            break;
    }
    return best;
}

PrepareResult run_prepare(const RunConfig &cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    PrepareResult res;
    res.problem = setup_problem(cfg);
    const Ansatz ansatz(res.problem.spec, cfg.layers,
                        {cfg.trotter_order, cfg.tie_angles});
    res.layers = cfg.layers;
    res.parameter_count = ansatz.parameter_count();

    AttemptResult attempt = optimize_with_restarts(ansatz, res.problem, cfg);
    res.trace = std::move(attempt.trace);
    res.attempts = attempt.attempts;
    res.final_energy = res.trace.rows.back().energy;
    res.final_entropy = res.trace.rows.back().entropy;
    res.profile = layer_profile(ansatz, res.trace.final_theta, res.problem.psi0,
                                res.problem.target_block.front());
    res.wall_seconds = seconds_since(t0);
    return res;
}

LayerSweepResult run_sweep_layers(const RunConfig &cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Problem prob = setup_problem(cfg);
    const int lo = cfg.layer_min > 0 ? cfg.layer_min : 1;
    const int hi = cfg.layer_max > 0 ? cfg.layer_max : default_layer_cap(cfg.size);
    if (lo > hi)
        throw std::invalid_argument("config: empty layer range");

    LayerSweepResult out;
    for (int n = lo; n <= hi; ++n) {
        const Ansatz ansatz(prob.spec, n, {cfg.trotter_order, cfg.tie_angles});
        AttemptResult attempt = optimize_with_restarts(ansatz, prob, cfg);
        const OptimizationTrace &trace = attempt.trace;

        LayerSweepRow row;
        row.layers = n;
        row.parameter_count = ansatz.parameter_count();
        row.status = trace.status;
        row.iterations = trace.iterations;
        row.fidelity = trace.final_fidelity;
        row.energy_error = std::abs(trace.rows.back().energy - prob.target_energy);
        row.attempts = attempt.attempts;
        out.rows.push_back(row);

        out.max_norm_dev = std::max(out.max_norm_dev, trace.max_norm_dev);
        out.max_charge_dev = std::max(out.max_charge_dev, trace.max_charge_dev);

        if (trace.status == RunStatus::Converged) {
            if (out.n_c < 0)
                out.n_c = n;
            if (cfg.early_stop)
                break;
        }
    }
    out.wall_seconds = seconds_since(t0);
    return out;
}

SizeSweepResult run_sweep_size(const RunConfig &cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    if (cfg.sizes.empty())
        throw std::invalid_argument("config: sweep-size needs a list of sizes");

    SizeSweepResult out;
    for (const int size : cfg.sizes) {
        RunConfig sub = cfg;
        sub.size = size;
        sub.sizes.clear();
        const LayerSweepResult sweep = run_sweep_layers(sub);

        SizeSweepRow row;
        row.size = size;
        row.n_c = sweep.n_c;
        for (const auto &r : sweep.rows)
            row.fidelity = std::max(row.fidelity, r.fidelity);
        out.rows.push_back(row);

        out.max_norm_dev = std::max(out.max_norm_dev, sweep.max_norm_dev);
        out.max_charge_dev = std::max(out.max_charge_dev, sweep.max_charge_dev);
    }
    out.wall_seconds = seconds_since(t0);
    return out;
}

CouplingSweepResult run_sweep_coupling(const RunConfig &cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    if (cfg.model != "ising")
        throw std::invalid_argument("config: sweep-coupling runs on the ising model");
    if (cfg.lambda_x_list.empty())
        throw std::invalid_argument("config: sweep-coupling needs a coupling list");
    for (double lx : cfg.lambda_x_list)
        if (!(lx > 0.0))
            throw std::invalid_argument(
                "config: the correlation-length estimator needs lambda_x > 0");

    CouplingSweepResult out;
    for (const double lx : cfg.lambda_x_list) {
        RunConfig sub = cfg;
        sub.lambda_x = lx;
        sub.lambda_x_list.clear();

        CouplingSweepRow row;
        row.lambda_x = lx;
        row.xi = correlation_length(lx, cfg.lambda_z, cfg.size);
        const LayerSweepResult sweep = run_sweep_layers(sub);
        row.n_c = sweep.n_c;
        for (const auto &r : sweep.rows)
            row.fidelity = std::max(row.fidelity, r.fidelity);
        out.rows.push_back(row);

        out.max_norm_dev = std::max(out.max_norm_dev, sweep.max_norm_dev);
        out.max_charge_dev = std::max(out.max_charge_dev, sweep.max_charge_dev);
    }
    out.wall_seconds = seconds_since(t0);
    return out;
}

std::vector<SpectrumRow> run_spectrum(const RunConfig &cfg) {
    cfg.validate();
    const HamiltonianSpec spec = build_model(cfg);
    std::vector<SpectrumRow> rows;

    const bool sectored =
        spec.conserves(SymmetryCharge::ProductZ) && cfg.sector != 0;
    if (sectored) {
        for (const int q : {1, -1}) {
            const auto dim =
                static_cast<Eigen::Index>(sector_indices(cfg.size, q).size());
            const int k = static_cast<int>(std::min<Eigen::Index>(cfg.levels, dim));
            for (const auto &t : eigenstates(spec, q, k))
                rows.push_back({q, t.index_in_sector, t.energy, t.degenerate});
        }
    } else {
        const int k = static_cast<int>(
            std::min<Eigen::Index>(cfg.levels, Eigen::Index{1} << cfg.size));
        for (const auto &t : eigenstates_full(spec, k))
            rows.push_back({std::nullopt, t.index_in_sector, t.energy, t.degenerate});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SpectrumRow &a, const SpectrumRow &b) {
                         return a.energy < b.energy;
                     });
    return rows;
}

void write_file_atomic(const std::filesystem::path &path, const std::string &text) {
    namespace fs = std::filesystem;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        if (!out.good())
            throw std::runtime_error("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

std::string trace_csv(const OptimizationTrace &trace) {
    std::ostringstream ss;
    ss << std::setprecision(17);
    ss << "# qprep trace v1\n";
    ss << "t,cost,fidelity,energy,entropy,grad_norm,step_norm\n";
    for (const auto &r : trace.rows)
        ss << r.t << ',' << r.cost << ',' << r.fidelity << ',' << r.energy << ','
           << r.entropy << ',' << r.grad_norm << ',' << r.step_norm << '\n';
    return ss.str();
}

std::string profile_csv(const std::vector<ProfileRow> &rows) {
    std::ostringstream ss;
    ss << std::setprecision(17);
    ss << "# qprep profile v1\n";
    ss << "layer,fidelity,energy,entropy\n";
    for (const auto &r : rows)
        ss << r.layer << ',' << r.fidelity << ',' << r.energy << ',' << r.entropy
           << '\n';
    return ss.str();
}

ordered_json diagnostics_json(double norm_dev, double charge_dev,
                              double min_metric_eig, int escalations) {
    ordered_json d;
    d["max_norm_dev"] = norm_dev;
    d["max_charge_dev"] = charge_dev;
    d["min_metric_eig"] = min_metric_eig;
    d["epsilon_escalations"] = escalations;
    return d;
}

ordered_json optimizer_json(const RunConfig &cfg) {
    ordered_json o;
    o["eta"] = cfg.opt.eta;
    o["epsilon"] = cfg.opt.epsilon;
    o["cutoff"] = cfg.opt.fidelity_cutoff;
    o["max_iters"] = cfg.opt.max_iters;
    o["init_angle"] = cfg.opt.init_angle;
    o["random_init"] = cfg.opt.random_init;
    o["amplitude"] = cfg.opt.amplitude;
    o["cost"] = to_string(cfg.opt.cost);
    o["seed"] = cfg.seed;
    return o;
}

ordered_json summary_json(const RunConfig &cfg, const PrepareResult &res) {
    ordered_json j;
    j["schema"] = "qprep-summary-v1";
    j["model"] = cfg.model;
    j["size"] = cfg.size;
    ordered_json couplings;
    for (const auto &[name, value] : res.problem.spec.couplings)
        couplings[name] = value;
    j["couplings"] = couplings;
    if (cfg.model == "xxz")
        j["grouping"] = to_string(cfg.grouping);
    if (res.problem.sector)
        j["sector"] = *res.problem.sector;
    else
        j["sector"] = nullptr;
    j["state_index"] = res.problem.state_index;
    j["layers"] = res.layers;
    j["parameter_count"] = res.parameter_count;
    j["status"] = to_string(res.trace.status);
    j["iterations"] = res.trace.iterations;
    j["attempts"] = res.attempts;
    j["final_fidelity"] = res.trace.final_fidelity;
    j["energy"] = ordered_json{
        {"circuit", res.final_energy},
        {"target", res.problem.target_energy},
        {"abs_error", std::abs(res.final_energy - res.problem.target_energy)}};
    j["entropy"] = ordered_json{
        {"circuit", res.final_entropy},
        {"target", res.problem.target_entropy},
        {"abs_error", std::abs(res.final_entropy - res.problem.target_entropy)}};
    j["target_degenerate"] = res.problem.degenerate;
    j["target_block_size"] = res.problem.target_block.size();
    j["diagnostics"] =
        diagnostics_json(res.trace.max_norm_dev, res.trace.max_charge_dev,
                         res.trace.min_metric_eig, res.trace.epsilon_escalations);
    j["optimizer"] = optimizer_json(cfg);
    j["trotter_order"] = cfg.trotter_order;
    j["tie_angles"] = cfg.tie_angles;
    j["wall_time_s"] = res.wall_seconds;
    return j;
}

} // namespace

PrepareResult cmd_prepare(const RunConfig &cfg) {
    PrepareResult res = run_prepare(cfg);
    const std::filesystem::path dir = cfg.out_dir;
    std::filesystem::create_directories(dir);

    write_file_atomic(dir / "trace.csv", trace_csv(res.trace));
    write_file_atomic(dir / "profile.csv", profile_csv(res.profile));

    const Ansatz ansatz(res.problem.spec, res.layers,
                        {cfg.trotter_order, cfg.tie_angles});
    const std::filesystem::path tmp = dir / "angles.json.tmp";
    save_angles(tmp, ansatz, res.trace.final_theta);
    std::filesystem::rename(tmp, dir / "angles.json");

    write_file_atomic(dir / "summary.json", summary_json(cfg, res).dump(2) + "\n");
    return res;
}

LayerSweepResult cmd_sweep_layers(const RunConfig &cfg) {
    LayerSweepResult res = run_sweep_layers(cfg);

    std::ostringstream ss;
    ss << std::setprecision(17);
    ss << "# qprep sweep-layers v1\n";
    ss << "layers,parameter_count,status,iterations,final_fidelity,energy_error,"
          "attempts\n";
    for (const auto &r : res.rows)
        ss << r.layers << ',' << r.parameter_count << ',' << to_string(r.status)
           << ',' << r.iterations << ',' << r.fidelity << ',' << r.energy_error
           << ',' << r.attempts << '\n';
    write_file_atomic(cfg.out_dir / "sweep_layers.csv", ss.str());

    ordered_json j;
    j["schema"] = "qprep-sweep-layers-v1";
    j["model"] = cfg.model;
    j["size"] = cfg.size;
    j["n_c"] = res.n_c;
    j["diagnostics"] = ordered_json{{"max_norm_dev", res.max_norm_dev},
                                    {"max_charge_dev", res.max_charge_dev}};
    j["wall_time_s"] = res.wall_seconds;
    write_file_atomic(cfg.out_dir / "sweep_layers.json", j.dump(2) + "\n");
    return res;
}

SizeSweepResult cmd_sweep_size(const RunConfig &cfg) {
    SizeSweepResult res = run_sweep_size(cfg);

    std::ostringstream ss;
    ss << std::setprecision(17);
    ss << "# qprep sweep-size v1\n";
    ss << "size,n_c,fidelity\n";
    for (const auto &r : res.rows)
        ss << r.size << ',' << r.n_c << ',' << r.fidelity << '\n';
    write_file_atomic(cfg.out_dir / "sweep_size.csv", ss.str());

    ordered_json j;
    j["schema"] = "qprep-sweep-size-v1";
    j["model"] = cfg.model;
    j["diagnostics"] = ordered_json{{"max_norm_dev", res.max_norm_dev},
                                    {"max_charge_dev", res.max_charge_dev}};
    j["wall_time_s"] = res.wall_seconds;
    write_file_atomic(cfg.out_dir / "sweep_size.json", j.dump(2) + "\n");
    return res;
}

CouplingSweepResult cmd_sweep_coupling(const RunConfig &cfg) {
    CouplingSweepResult res = run_sweep_coupling(cfg);

    std::ostringstream ss;
    ss << std::setprecision(17);
    ss << "# qprep sweep-coupling v1\n";
    ss << "lambda_x,xi,n_c,fidelity\n";
    for (const auto &r : res.rows)
        ss << r.lambda_x << ',' << r.xi << ',' << r.n_c << ',' << r.fidelity << '\n';
    write_file_atomic(cfg.out_dir / "sweep_coupling.csv", ss.str());

    ordered_json j;
    j["schema"] = "qprep-sweep-coupling-v1";
    j["model"] = cfg.model;
    j["size"] = cfg.size;
    j["diagnostics"] = ordered_json{{"max_norm_dev", res.max_norm_dev},
                                    {"max_charge_dev", res.max_charge_dev}};
    j["wall_time_s"] = res.wall_seconds;
    write_file_atomic(cfg.out_dir / "sweep_coupling.json", j.dump(2) + "\n");
    return res;
}

std::vector<SpectrumRow> cmd_spectrum(const RunConfig &cfg) {
    std::vector<SpectrumRow> rows = run_spectrum(cfg);

    std::ostringstream ss;
    ss << std::setprecision(17);
    ss << "# qprep spectrum v1\n";
    ss << "sector,index,energy,degenerate\n";
    for (const auto &r : rows) {
        if (r.sector)
            ss << *r.sector;
        ss << ',' << r.index << ',' << r.energy << ',' << (r.degenerate ? 1 : 0)
           << '\n';
    }
    write_file_atomic(cfg.out_dir / "spectrum.csv", ss.str());
    return rows;
}

} // namespace qprep
