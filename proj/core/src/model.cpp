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

#include "qprep/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qprep {

int sublayer_rank(Locality l) {
    switch (l) {
    case Locality::NearestNeighbor:
        return 0;
    case Locality::OnSite:
        return 1;
    case Locality::NextNearestNeighbor:
        return 2;
    }
    throw std::logic_error("invalid Locality");
}

std::string to_string(Locality l) {
    switch (l) {
    case Locality::NearestNeighbor:
        return "nn";
    case Locality::OnSite:
        return "ons";
    case Locality::NextNearestNeighbor:
        return "nnn";
    }
    throw std::logic_error("invalid Locality");
}

bool HamiltonianSpec::conserves(SymmetryCharge q) const {
    return std::find(declared_symmetries.begin(), declared_symmetries.end(), q) !=
           declared_symmetries.end();
}

std::size_t HamiltonianSpec::total_terms() const {
    std::size_t n = 0;
    for (const auto &g : groups)
        n += g.terms.size();
    return n;
}

std::size_t HamiltonianSpec::total_strings() const {
    std::size_t n = 0;
    for (const auto &g : groups)
        for (const auto &t : g.terms)
            n += t.strings.size();
    return n;
}

std::vector<PauliString> HamiltonianSpec::all_strings() const {
    std::vector<PauliString> out;
    out.reserve(total_strings());
    for (const auto &g : groups)
        for (const auto &t : g.terms)
            out.insert(out.end(), t.strings.begin(), t.strings.end());
    return out;
}

namespace {

// Remaps a term's strings onto the compact window of its support sites so
// a dense commutator check stays tiny (at most 2^3 for the models here).
std::vector<int> support_window(const GroupTerm &term) {
    std::vector<int> sites;
    for (const auto &s : term.strings)
        for (const auto &op : s.ops())
            sites.push_back(op.site);
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    return sites;
}

PauliString remap(const PauliString &s, const std::vector<int> &window) {
    std::vector<SiteOp> ops;
    ops.reserve(s.ops().size());
    for (const auto &op : s.ops()) {
        const auto it = std::lower_bound(window.begin(), window.end(), op.site);
        ops.push_back({static_cast<int>(it - window.begin()), op.op});
    }
    return PauliString(std::move(ops), s.coefficient());
}

} // namespace

bool charge_preserved(SymmetryCharge charge, const GroupTerm &term) {
    if (term.strings.size() == 1)
        return charge_preserved(charge, term.strings.front());
    const std::vector<int> window = support_window(term);
    std::vector<PauliString> local;
    local.reserve(term.strings.size());
    for (const auto &s : term.strings)
        local.push_back(remap(s, window));
    const int w = static_cast<int>(window.size());
    const Eigen::MatrixXcd k = dense_matrix(local, w);
    // The charge restricted to the window: letters off the support commute
    // with everything, so they cannot contribute to the commutator.
    const Eigen::MatrixXcd q = dense_charge(charge, w);
    return (k * q - q * k).cwiseAbs().maxCoeff() < 1e-12;
}

bool group_intra_commuting(const TermGroup &group) {
    std::vector<const PauliString *> strings;
    for (const auto &t : group.terms)
        for (const auto &s : t.strings)
            strings.push_back(&s);
    for (std::size_t a = 0; a < strings.size(); ++a)
        for (std::size_t b = a + 1; b < strings.size(); ++b)
            if (!terms_commute(*strings[a], *strings[b]))
                return false;
    return true;
}

namespace {

TermGroup finish_group(std::string label, Locality loc, std::vector<GroupTerm> terms) {
    TermGroup g{std::move(label), loc, std::move(terms), false};
    g.intra_commuting = group_intra_commuting(g);
    return g;
}

GroupTerm single(int site, const PauliString &s) { return GroupTerm{site, {s}}; }

} // namespace

HamiltonianSpec build_ising(int num_sites, double lambda_x, double lambda_z) {
    if (num_sites < 2)
        throw std::invalid_argument("build_ising: need at least 2 sites");
    HamiltonianSpec spec;
    spec.model = "ising";
    spec.num_sites = num_sites;
    spec.couplings = {{"lambda_x", lambda_x}, {"lambda_z", lambda_z}};

    std::vector<GroupTerm> xx;
    for (int j = 0; j + 1 < num_sites; ++j)
        xx.push_back(single(j, PauliString::from_pattern("XX", j, -1.0)));
    spec.groups.push_back(finish_group("XX", Locality::NearestNeighbor, std::move(xx)));

    if (lambda_z != 0.0) {
        std::vector<GroupTerm> z;
        for (int j = 0; j < num_sites; ++j)
            z.push_back(single(j, PauliString::from_pattern("Z", j, -lambda_z)));
        spec.groups.push_back(finish_group("Z", Locality::OnSite, std::move(z)));
    }
    if (lambda_x != 0.0) {
        std::vector<GroupTerm> x;
        for (int j = 0; j < num_sites; ++j)
            x.push_back(single(j, PauliString::from_pattern("X", j, -lambda_x)));
        spec.groups.push_back(finish_group("X", Locality::OnSite, std::move(x)));
    }
    if (lambda_x == 0.0)
        spec.declared_symmetries = {SymmetryCharge::ProductZ};
    return spec;
}

HamiltonianSpec build_tci(int num_sites, double lambda_z, double lambda_zxx) {
    if (num_sites < 3)
        throw std::invalid_argument("build_tci: need at least 3 sites");
    HamiltonianSpec spec;
    spec.model = "tci";
    spec.num_sites = num_sites;
    spec.couplings = {{"lambda_z", lambda_z}, {"lambda_zxx", lambda_zxx}};

    std::vector<GroupTerm> xx;
    for (int j = 0; j + 1 < num_sites; ++j)
        xx.push_back(single(j, PauliString::from_pattern("XX", j, -1.0)));
    spec.groups.push_back(finish_group("XX", Locality::NearestNeighbor, std::move(xx)));

    if (lambda_z != 0.0) {
        std::vector<GroupTerm> z;
        for (int j = 0; j < num_sites; ++j)
            z.push_back(single(j, PauliString::from_pattern("Z", j, -lambda_z)));
        spec.groups.push_back(finish_group("Z", Locality::OnSite, std::move(z)));
    }
    if (lambda_zxx != 0.0) {
        std::vector<GroupTerm> zxx;
        for (int j = 0; j + 2 < num_sites; ++j) {
            zxx.push_back(single(j, PauliString::from_pattern("XXZ", j, lambda_zxx)));
            zxx.push_back(single(j, PauliString::from_pattern("ZXX", j, lambda_zxx)));
        }
        spec.groups.push_back(
            finish_group("ZXX", Locality::NextNearestNeighbor, std::move(zxx)));
    }
    spec.declared_symmetries = {SymmetryCharge::ProductZ};
    return spec;
}

HamiltonianSpec build_xxz(int num_sites, double gamma, XxzGrouping grouping) {
    if (num_sites < 2)
        throw std::invalid_argument("build_xxz: need at least 2 sites");
    HamiltonianSpec spec;
    spec.model = "xxz";
    spec.num_sites = num_sites;
    spec.couplings = {{"gamma", gamma}};
    const double zz_coeff = -std::cos(gamma);

    if (grouping == XxzGrouping::ByPauli) {
        for (const char letter : {'X', 'Y', 'Z'}) {
            const double c = (letter == 'Z') ? zz_coeff : -1.0;
            if (c == 0.0)
                continue;
            const std::string pattern(2, letter);
            std::vector<GroupTerm> terms;
            for (int j = 0; j + 1 < num_sites; ++j)
                terms.push_back(single(j, PauliString::from_pattern(pattern, j, c)));
            spec.groups.push_back(
                finish_group(pattern, Locality::NearestNeighbor, std::move(terms)));
        }
        spec.declared_symmetries = {SymmetryCharge::ProductZ};
    } else {
        std::vector<GroupTerm> hop;
        for (int j = 0; j + 1 < num_sites; ++j)
            hop.push_back(GroupTerm{j,
                                    {PauliString::from_pattern("XX", j, -1.0),
                                     PauliString::from_pattern("YY", j, -1.0)}});
        spec.groups.push_back(
            finish_group("XX+YY", Locality::NearestNeighbor, std::move(hop)));
        if (zz_coeff != 0.0) {
            std::vector<GroupTerm> zz;
            for (int j = 0; j + 1 < num_sites; ++j)
                zz.push_back(single(j, PauliString::from_pattern("ZZ", j, zz_coeff)));
            spec.groups.push_back(
                finish_group("ZZ", Locality::NearestNeighbor, std::move(zz)));
        }
        spec.declared_symmetries = {SymmetryCharge::SumZ, SymmetryCharge::ProductZ};
    }
    return spec;
}

ValidationReport validate_spec(const HamiltonianSpec &spec) {
    ValidationReport report;
    report.total_strings = spec.total_strings();
    for (const auto &g : spec.groups) {
        const bool commuting = group_intra_commuting(g);
        report.groups.push_back({g.label, commuting, g.terms.size()});
        if (commuting != g.intra_commuting) {
            std::ostringstream msg;
            msg << "group " << g.label << ": stored intra_commuting="
                << g.intra_commuting << " but recomputed " << commuting;
            report.violations.push_back(msg.str());
        }
        for (const auto &t : g.terms) {
            for (const auto &q : spec.declared_symmetries) {
                if (!charge_preserved(q, t)) {
                    std::ostringstream msg;
                    msg << "group " << g.label << " term at site " << t.site
                        << " violates "
                        << (q == SymmetryCharge::ProductZ ? "ProductZ" : "SumZ");
                    report.violations.push_back(msg.str());
                }
            }
        }
    }
    return report;
}

} // namespace qprep
