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

// Command-line front end. Subcommands: prepare, sweep-layers, sweep-size,
// sweep-coupling, spectrum. Precedence: flags > config file > defaults.
// Exit codes: 0 success, 1 config error, 2 convergence failure,
// 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "qprep/harness.hpp"

namespace {

// Raw flag values; only flags the user actually passed override the
// config file. List-valued flags stay strings until the subcommand fixes
// their meaning (single depth vs range, single size vs list).
struct Overrides {
    std::optional<std::string> config;
    std::optional<std::string> model;
    std::optional<std::string> size_text;
    std::optional<std::string> lambda_x_text;
    std::optional<double> lambda_z;
    std::optional<double> lambda_zxx;
    std::optional<double> gamma;
    std::optional<std::string> grouping;
    std::optional<std::string> sector;
    std::optional<int> state_index;
    std::optional<std::string> layers_text;
    std::optional<double> eta;
    std::optional<double> epsilon;
    std::optional<double> cutoff;
    std::optional<int> max_iters;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> trotter_order;
    int tie_angles = 0;
    std::optional<int> restarts;
    int no_early_stop = 0;
    std::optional<int> levels;
};

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const std::size_t end = text.find(sep, begin);
        if (end == std::string::npos) {
            parts.push_back(text.substr(begin));
            break;
        }
        parts.push_back(text.substr(begin, end - begin));
        begin = end + 1;
    }
    return parts;
}

int parse_int(const std::string &text, const char *what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used == text.size())
            return v;
    } catch (const std::exception &) {
    }
    throw std::invalid_argument(std::string("config: bad ") + what + " \"" + text +
                                "\"");
}

double parse_double(const std::string &text, const char *what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size())
            return v;
    } catch (const std::exception &) {
    }
    throw std::invalid_argument(std::string("config: bad ") + what + " \"" + text +
                                "\"");
}

enum class Cmd { Prepare, SweepLayers, SweepSize, SweepCoupling, Spectrum };

qprep::RunConfig make_config(const Overrides &o, Cmd cmd) {
    qprep::RunConfig cfg;
    if (o.config)
        cfg = qprep::load_config(*o.config);

    if (o.model)
        cfg.model = *o.model;
    if (o.size_text) {
        if (cmd == Cmd::SweepSize) {
            cfg.sizes.clear();
            for (const auto &part : split(*o.size_text, ','))
                cfg.sizes.push_back(parse_int(part, "size"));
        } else {
            cfg.size = parse_int(*o.size_text, "size");
        }
    }
    if (o.lambda_x_text) {
        if (cmd == Cmd::SweepCoupling) {
            cfg.lambda_x_list.clear();
            for (const auto &part : split(*o.lambda_x_text, ','))
                cfg.lambda_x_list.push_back(parse_double(part, "lambda_x"));
        } else {
            cfg.lambda_x = parse_double(*o.lambda_x_text, "lambda_x");
        }
    }
    if (o.lambda_z)
        cfg.lambda_z = *o.lambda_z;
    if (o.lambda_zxx)
        cfg.lambda_zxx = *o.lambda_zxx;
    if (o.gamma)
        cfg.gamma = *o.gamma;
    if (o.grouping)
        cfg.grouping = qprep::parse_grouping(*o.grouping);
    if (o.sector)
        cfg.sector = qprep::parse_sector(*o.sector);
    if (o.state_index)
        cfg.state_index = *o.state_index;
    if (o.layers_text) {
        const bool swept = cmd == Cmd::SweepLayers || cmd == Cmd::SweepSize ||
                           cmd == Cmd::SweepCoupling;
        if (swept) {
            // "LO:HI" bounds the sweep; a single depth means 1..N.
            const auto parts = split(*o.layers_text, ':');
            if (parts.size() == 2) {
                cfg.layer_min = parse_int(parts[0], "layer bound");
                cfg.layer_max = parse_int(parts[1], "layer bound");
            } else if (parts.size() == 1) {
                cfg.layer_min = 1;
                cfg.layer_max = parse_int(parts[0], "layer bound");
            } else {
                throw std::invalid_argument("config: bad layer range \"" +
                                            *o.layers_text + "\"");
            }
        } else {
            cfg.layers = parse_int(*o.layers_text, "layer count");
        }
    }
    if (o.eta)
        cfg.opt.eta = *o.eta;
    if (o.epsilon)
        cfg.opt.epsilon = *o.epsilon;
    if (o.cutoff)
        cfg.opt.fidelity_cutoff = *o.cutoff;
    if (o.max_iters)
        cfg.opt.max_iters = *o.max_iters;
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.out)
        cfg.out_dir = *o.out;
    if (o.trotter_order)
        cfg.trotter_order = *o.trotter_order;
    if (o.tie_angles > 0)
        cfg.tie_angles = true;
    if (o.restarts)
        cfg.restarts = *o.restarts;
    if (o.no_early_stop > 0)
        cfg.early_stop = false;
    if (o.levels)
        cfg.levels = *o.levels;
    return cfg;
}

void write_error(const std::filesystem::path &dir, const std::string &kind,
                 const std::string &message) {
    std::cerr << "error (" << kind << "): " << message << "\n";
    try {
        nlohmann::ordered_json j;
        j["schema"] = "qprep-error-v1";
        j["kind"] = kind;
        j["message"] = message;
        qprep::write_file_atomic(dir / "error.json", j.dump(2) + "\n");
    } catch (...) {
        // Reporting must not mask the original failure.
    }
}

std::filesystem::path error_dir(const Overrides &o) {
    if (o.out)
        return *o.out;
    return qprep::RunConfig{}.out_dir;
}

int dispatch(Cmd cmd, const qprep::RunConfig &cfg) {
    switch (cmd) {
    case Cmd::Prepare: {
        const qprep::PrepareResult res = qprep::cmd_prepare(cfg);
        std::cout << "prepare: status=" << qprep::to_string(res.trace.status)
                  << " layers=" << res.layers
                  << " fidelity=" << res.trace.final_fidelity << " out="
                  << cfg.out_dir.string() << "\n";
        if (res.trace.status != qprep::RunStatus::Converged) {
            write_error(cfg.out_dir, "convergence",
                        "preparation stopped below the fidelity cutoff");
            return 2;
        }
        return 0;
    }
    case Cmd::SweepLayers: {
        const qprep::LayerSweepResult res = qprep::cmd_sweep_layers(cfg);
        std::cout << "sweep-layers: n_c=" << res.n_c << " rows=" << res.rows.size()
                  << " out=" << cfg.out_dir.string() << "\n";
        if (res.n_c < 0) {
            write_error(cfg.out_dir, "convergence",
                        "no depth in the sweep range reached the cutoff");
            return 2;
        }
        return 0;
    }
    case Cmd::SweepSize: {
        const qprep::SizeSweepResult res = qprep::cmd_sweep_size(cfg);
        bool all = true;
        std::cout << "sweep-size:";
        for (const auto &row : res.rows) {
            std::cout << " L" << row.size << "->" << row.n_c;
            all = all && row.n_c >= 0;
        }
        std::cout << " out=" << cfg.out_dir.string() << "\n";
        if (!all) {
            write_error(cfg.out_dir, "convergence",
                        "some sizes never reached the cutoff in the depth range");
            return 2;
        }
        return 0;
    }
    case Cmd::SweepCoupling: {
        const qprep::CouplingSweepResult res = qprep::cmd_sweep_coupling(cfg);
        bool all = true;
        std::cout << "sweep-coupling:";
        for (const auto &row : res.rows) {
            std::cout << " lx=" << row.lambda_x << "->" << row.n_c;
            all = all && row.n_c >= 0;
        }
        std::cout << " out=" << cfg.out_dir.string() << "\n";
        if (!all) {
            write_error(cfg.out_dir, "convergence",
                        "some couplings never reached the cutoff in the depth range");
            return 2;
        }
        return 0;
    }
    case Cmd::Spectrum: {
        const auto rows = qprep::cmd_spectrum(cfg);
        std::cout << "spectrum: rows=" << rows.size() << " out="
                  << cfg.out_dir.string() << "\n";
        return 0;
    }
    }
    return 1;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"symmetry-conserving circuit preparation of spin-chain eigenstates"};
    app.require_subcommand(1);

    Overrides o;
    const auto add_common = [&o](CLI::App *sub) {
        sub->add_option("--config", o.config, "JSON config file; flags override it");
        sub->add_option("--model", o.model, "ising | tci | xxz");
        sub->add_option("--size", o.size_text,
                        "chain length (comma list for sweep-size)");
        sub->add_option("--lambda-x", o.lambda_x_text,
                        "Ising longitudinal field (comma list for sweep-coupling)");
        sub->add_option("--lambda-z", o.lambda_z, "Ising/TCI transverse field");
        sub->add_option("--lambda-zxx", o.lambda_zxx, "TCI three-site coupling");
        sub->add_option("--gamma", o.gamma, "XXZ anisotropy angle");
        sub->add_option("--grouping", o.grouping, "XXZ sublayers: by_pauli | u1");
        sub->add_option("--sector", o.sector, "auto | full | +1 | -1");
        sub->add_option("--state-index", o.state_index,
                        "eigenstate index within the sector");
        sub->add_option("--layers", o.layers_text,
                        "circuit depth (LO:HI range for sweep-layers)");
        sub->add_option("--eta", o.eta, "natural-gradient step size");
        sub->add_option("--epsilon", o.epsilon, "metric regularization");
        sub->add_option("--cutoff", o.cutoff, "fidelity convergence threshold");
        sub->add_option("--max-iters", o.max_iters, "iteration budget per depth");
        sub->add_option("--seed", o.seed, "base seed for random restarts");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--trotter-order", o.trotter_order,
                        "splitting order for non-commuting groups: 1 | 2");
        sub->add_flag("--tie-angles", o.tie_angles,
                      "one shared angle per group per layer");
        sub->add_option("--restarts", o.restarts,
                        "random restarts after a failed attempt (-1: auto)");
        sub->add_flag("--no-early-stop", o.no_early_stop,
                      "sweep past the first converged depth");
        sub->add_option("--levels", o.levels, "eigenvalues per sector (spectrum)");
    };

    CLI::App *prepare =
        app.add_subcommand("prepare", "optimize a circuit for one eigenstate");
    CLI::App *sweep_layers = app.add_subcommand(
        "sweep-layers", "scan circuit depths and report the minimal converged one");
    CLI::App *sweep_size =
        app.add_subcommand("sweep-size", "minimal converged depth per chain length");
    CLI::App *sweep_coupling = app.add_subcommand(
        "sweep-coupling", "depth and correlation length across couplings");
    CLI::App *spectrum =
        app.add_subcommand("spectrum", "dump low-lying energies per sector");
    for (CLI::App *sub :
         {prepare, sweep_layers, sweep_size, sweep_coupling, spectrum})
        add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    Cmd cmd = Cmd::Prepare;
    if (sweep_layers->parsed())
        cmd = Cmd::SweepLayers;
    else if (sweep_size->parsed())
        cmd = Cmd::SweepSize;
    else if (sweep_coupling->parsed())
        cmd = Cmd::SweepCoupling;
    else if (spectrum->parsed())
        cmd = Cmd::Spectrum;

    try {
        return dispatch(cmd, make_config(o, cmd));
    } catch (const std::invalid_argument &e) {
        write_error(error_dir(o), "config", e.what());
        return 1;
    } catch (const std::runtime_error &e) {
        write_error(error_dir(o), "numerical", e.what());
        return 3;
    } catch (const std::exception &e) {
        write_error(error_dir(o), "numerical", e.what());
        return 3;
    }
}
