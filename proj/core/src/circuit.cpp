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

#include "qprep/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

namespace qprep {

Ansatz::Ansatz(HamiltonianSpec spec, int layers, AnsatzOptions opts)
    : spec_(std::move(spec)), layers_(layers), opts_(opts) {
    if (layers_ < 1)
        throw std::invalid_argument("Ansatz: need at least one layer");
    if (spec_.groups.empty())
        throw std::invalid_argument("Ansatz: empty Hamiltonian spec");
    if (opts_.trotter_order != 1 && opts_.trotter_order != 2)
        throw std::invalid_argument("Ansatz: trotter order must be 1 or 2");

    // Sublayer order: nn, ons, nnn; builder declaration order within a
    // class (stable).
    group_order_.resize(spec_.groups.size());
    std::iota(group_order_.begin(), group_order_.end(), 0);
    std::stable_sort(group_order_.begin(), group_order_.end(), [&](int a, int b) {
        return sublayer_rank(spec_.groups[a].locality) <
               sublayer_rank(spec_.groups[b].locality);
    });

    // The circuit conserves a declared charge only if every term does.
    for (const int gi : group_order_) {
        const TermGroup &g = spec_.groups[gi];
        for (const auto &q : spec_.declared_symmetries)
            for (const auto &t : g.terms)
                if (!charge_preserved(q, t))
                    throw std::invalid_argument(
                        "Ansatz: group " + g.label + " breaks a declared symmetry");
    }

    // Flatten terms; remember per-group term offsets and same-site
    // ordinals (the three-body family has two terms per anchor).
    std::vector<std::vector<int>> group_terms(spec_.groups.size());
    for (const int gi : group_order_) {
        const TermGroup &g = spec_.groups[gi];
        int prev_site = -1;
        int variant = 0;
        for (const auto &t : g.terms) {
            variant = (t.site == prev_site) ? variant + 1 : 0;
            prev_site = t.site;
            CompiledTerm ct{gi, t.site, variant, {}};
            for (const auto &s : t.strings)
                ct.kernels.push_back(PauliKernel::compile(s));
            group_terms[gi].push_back(static_cast<int>(terms_.size()));
            terms_.push_back(std::move(ct));
        }
    }

    for (int l = 0; l < layers_; ++l) {
        layer_starts_.push_back(static_cast<int>(gates_.size()));
        for (const int gi : group_order_) {
            const TermGroup &g = spec_.groups[gi];
            const auto &term_ids = group_terms[gi];
            const int t_count = static_cast<int>(term_ids.size());

            // Parameters of this sublayer, in term order (or one shared).
            std::vector<int> term_param(t_count);
            if (opts_.tie_angles) {
                const int p = static_cast<int>(params_.size());
                params_.push_back({l, gi, -1, -1});
                param_gates_.emplace_back();
                std::fill(term_param.begin(), term_param.end(), p);
            } else {
                for (int t = 0; t < t_count; ++t) {
                    term_param[t] = static_cast<int>(params_.size());
                    params_.push_back(
                        {l, gi, terms_[term_ids[t]].site, terms_[term_ids[t]].variant});
                    param_gates_.emplace_back();
                }
            }

            const bool split = !g.intra_commuting && opts_.trotter_order == 2;
            const auto push_gate = [&](int t, double scale) {
                param_gates_[term_param[t]].push_back(static_cast<int>(gates_.size()));
                gates_.push_back({term_param[t], term_ids[t], scale});
            };
            if (split) {
                for (int t = 0; t < t_count; ++t)
                    push_gate(t, 0.5);
                for (int t = t_count - 1; t >= 0; --t)
                    push_gate(t, 0.5);
            } else {
                for (int t = 0; t < t_count; ++t)
                    push_gate(t, 1.0);
            }
            sublayer_ends_.push_back(static_cast<int>(gates_.size()));
        }
    }
    layer_starts_.push_back(static_cast<int>(gates_.size()));
}

int Ansatz::parameter_index(const ParameterKey &key) const {
    for (std::size_t p = 0; p < params_.size(); ++p)
        if (params_[p] == key)
            return static_cast<int>(p);
    throw std::invalid_argument("Ansatz: unknown parameter key");
}

std::pair<int, int> Ansatz::layer_gate_range(int layer) const {
    if (layer < 0 || layer >= layers_)
        throw std::invalid_argument("Ansatz: layer out of range");
    return {layer_starts_[layer], layer_starts_[layer + 1]};
}

namespace {

void apply_gate(State &psi, const Ansatz &a, const GateOp &gate, double theta) {
    const double angle = gate.scale * theta;
    for (const auto &k : a.terms()[gate.term].kernels)
        apply_exp_inplace(psi, k, angle);
}

struct ChargeBaseline {
    std::vector<double> values;
};

void update_stats(const State &psi, const HamiltonianSpec &spec,
                  const ChargeBaseline &base, EvolutionStats &stats) {
    stats.max_norm_dev = std::max(stats.max_norm_dev, std::abs(psi.norm() - 1.0));
    for (std::size_t i = 0; i < spec.declared_symmetries.size(); ++i) {
        const double now = charge_expectation(psi, spec.declared_symmetries[i]);
        stats.max_charge_dev =
            std::max(stats.max_charge_dev, std::abs(now - base.values[i]));
    }
}

ChargeBaseline charge_baseline(const State &psi, const HamiltonianSpec &spec) {
    ChargeBaseline base;
    for (const auto &q : spec.declared_symmetries)
        base.values.push_back(charge_expectation(psi, q));
    return base;
}

} // namespace

State apply_circuit(const Ansatz &a, const Eigen::VectorXd &theta, const State &psi0,
                    EvolutionStats *stats) {
    if (theta.size() != a.parameter_count())
        throw std::invalid_argument("apply_circuit: parameter length mismatch");
    if (psi0.num_sites != a.spec().num_sites)
        throw std::invalid_argument("apply_circuit: state size mismatch");
    State psi = psi0;
    ChargeBaseline base;
    if (stats)
        base = charge_baseline(psi0, a.spec());
    std::size_t next_boundary = 0;
    const auto &ends = a.sublayer_ends();
    for (std::size_t gidx = 0; gidx < a.gates().size(); ++gidx) {
        apply_gate(psi, a, a.gates()[gidx], theta[a.gates()[gidx].param]);
        if (stats && next_boundary < ends.size() &&
            static_cast<int>(gidx + 1) == ends[next_boundary]) {
            update_stats(psi, a.spec(), base, *stats);
            ++next_boundary;
        }
    }
    return psi;
}

std::vector<std::pair<int, double>>
trotter_sublayer(const TermGroup &group, std::span<const double> thetas, int order) {
    if (thetas.size() != group.terms.size())
        throw std::invalid_argument("trotter_sublayer: angle count mismatch");
    if (order != 1 && order != 2)
        throw std::invalid_argument("trotter_sublayer: order must be 1 or 2");
    const int n = static_cast<int>(group.terms.size());
    std::vector<std::pair<int, double>> seq;
    if (group.intra_commuting || order == 1) {
        for (int t = 0; t < n; ++t)
            seq.emplace_back(t, thetas[t]);
    } else {
        for (int t = 0; t < n; ++t)
            seq.emplace_back(t, 0.5 * thetas[t]);
        for (int t = n - 1; t >= 0; --t)
            seq.emplace_back(t, 0.5 * thetas[t]);
    }
    return seq;
}

ForwardCache forward_states(const Ansatz &a, const Eigen::VectorXd &theta,
                            const State &psi0, std::size_t memory_cap_bytes,
                            EvolutionStats *stats) {
    if (theta.size() != a.parameter_count())
        throw std::invalid_argument("forward_states: parameter length mismatch");
    if (psi0.num_sites != a.spec().num_sites)
        throw std::invalid_argument("forward_states: state size mismatch");
    const std::size_t gate_count = a.gates().size();
    const std::size_t bytes =
        (gate_count + 1) * static_cast<std::size_t>(psi0.dim()) *
        sizeof(std::complex<double>);
    if (bytes > memory_cap_bytes)
        throw ForwardCacheOverflow("forward_states: cache budget exceeded");

    ForwardCache cache;
    cache.before_gate.reserve(gate_count);
    State psi = psi0;
    ChargeBaseline base;
    if (stats)
        base = charge_baseline(psi0, a.spec());
    std::size_t next_boundary = 0;
    const auto &ends = a.sublayer_ends();
    for (std::size_t gidx = 0; gidx < gate_count; ++gidx) {
        cache.before_gate.push_back(psi.amps);
        apply_gate(psi, a, a.gates()[gidx], theta[a.gates()[gidx].param]);
        if (stats && next_boundary < ends.size() &&
            static_cast<int>(gidx + 1) == ends[next_boundary]) {
            update_stats(psi, a.spec(), base, *stats);
            ++next_boundary;
        }
    }
    cache.final_state = std::move(psi);
    return cache;
}

std::vector<ProfileRow> layer_profile(const Ansatz &a, const Eigen::VectorXd &theta,
                                      const State &psi0, const State &psi_target) {
    if (theta.size() != a.parameter_count())
        throw std::invalid_argument("layer_profile: parameter length mismatch");
    const bool even = a.spec().num_sites % 2 == 0;
    State psi = psi0;
    std::vector<ProfileRow> rows;
    for (int l = 0; l < a.layers(); ++l) {
        const auto [begin, end] = a.layer_gate_range(l);
        for (int gidx = begin; gidx < end; ++gidx)
            apply_gate(psi, a, a.gates()[gidx], theta[a.gates()[gidx].param]);
        rows.push_back({l + 1, std::abs(overlap(psi, psi_target)),
                        expectation(psi, a.spec()),
                        even ? half_chain_entropy(psi)
                             : std::numeric_limits<double>::quiet_NaN()});
    }
    return rows;
}

void save_angles(const std::filesystem::path &path, const Ansatz &a,
                 const Eigen::VectorXd &theta) {
    if (theta.size() != a.parameter_count())
        throw std::invalid_argument("save_angles: parameter length mismatch");
    nlohmann::json entries = nlohmann::json::array();
    for (int p = 0; p < a.parameter_count(); ++p) {
        const ParameterKey &key = a.parameter_keys()[p];
        entries.push_back({{"layer", key.layer + 1},
                           {"group", a.spec().groups[key.group].label},
                           {"site", key.site},
                           {"variant", key.variant},
                           {"theta", theta[p]}});
    }
    nlohmann::json doc{{"format", "qprep-angles-v1"},
                       {"model", a.spec().model},
                       {"size", a.spec().num_sites},
                       {"layers", a.layers()},
                       {"tie_angles", a.options().tie_angles},
                       {"parameter_count", a.parameter_count()},
                       {"entries", std::move(entries)}};
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_angles: cannot open " + path.string());
    out << doc.dump(2) << '\n';
}

Eigen::VectorXd load_angles(const std::filesystem::path &path, const Ansatz &a) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_angles: cannot open " + path.string());
    nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.value("format", "") != "qprep-angles-v1")
        throw std::runtime_error("load_angles: unknown format");
    if (doc.at("parameter_count").get<int>() != a.parameter_count() ||
        doc.at("layers").get<int>() != a.layers())
        throw std::runtime_error("load_angles: layout mismatch");
    Eigen::VectorXd theta(a.parameter_count());
    Eigen::VectorXd seen = Eigen::VectorXd::Zero(a.parameter_count());
    for (const auto &e : doc.at("entries")) {
        ParameterKey key;
        key.layer = e.at("layer").get<int>() - 1;
        key.site = e.at("site").get<int>();
        key.variant = e.at("variant").get<int>();
        const std::string label = e.at("group").get<std::string>();
        key.group = -1;
        for (std::size_t gi = 0; gi < a.spec().groups.size(); ++gi)
            if (a.spec().groups[gi].label == label)
                key.group = static_cast<int>(gi);
        if (key.group < 0)
            throw std::runtime_error("load_angles: unknown group " + label);
        const int p = a.parameter_index(key);
        theta[p] = e.at("theta").get<double>();
        seen[p] = 1.0;
    }
    if (seen.sum() != a.parameter_count())
        throw std::runtime_error("load_angles: missing entries");
    return theta;
}

} // namespace qprep
