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

#include <string>
#include <vector>

#include "qprep/pauli.hpp"

namespace qprep {

/// Locality class of a term group; also fixes sublayer application order
/// within a circuit layer (nearest-neighbour, then on-site, then
/// next-nearest-neighbour).
enum class Locality { NearestNeighbor, OnSite, NextNearestNeighbor };

int sublayer_rank(Locality l);
std::string to_string(Locality l);

/// One variational term K_j^s anchored at site j: a sum of one or more
/// mutually commuting Pauli strings sharing that anchor. Single strings
/// everywhere except the U(1)-preserving XXZ grouping, whose bond term is
/// the two-string sum XX+YY.
struct GroupTerm {
    int site;
    std::vector<PauliString> strings;
};

/// A labelled family of terms of equal locality class, e.g. all -X_jX_{j+1}
/// bonds. intra_commuting records whether every pair of strings across the
/// whole group commutes; groups where it fails need a Trotter split.
struct TermGroup {
    std::string label;
    Locality locality;
    std::vector<GroupTerm> terms;
    bool intra_commuting;
};

/// Which circuit decomposition build_xxz emits: one group per Pauli letter
/// (conserves spin-flip parity only) or the magnetization-conserving
/// grouping {XX+YY, ZZ}.
enum class XxzGrouping { ByPauli, U1 };

/// A Hamiltonian together with its group decomposition and the charges the
/// grouping conserves. Open boundary throughout.
struct HamiltonianSpec {
    std::string model;
    int num_sites = 0;
    std::vector<TermGroup> groups;
    std::vector<SymmetryCharge> declared_symmetries;

    /// Coupling constants by name, kept for reporting.
    std::vector<std::pair<std::string, double>> couplings;

    bool conserves(SymmetryCharge q) const;
    std::size_t total_terms() const;
    std::size_t total_strings() const;

    /// Every string of every group, flattened in declaration order.
    std::vector<PauliString> all_strings() const;
};

/// Whether conjugation by the charge preserves the (possibly multi-string)
/// term, checked by a dense commutator on the term's support window.
bool charge_preserved(SymmetryCharge charge, const GroupTerm &term);

/// Whether all string pairs across the group commute.
bool group_intra_commuting(const TermGroup &group);

/// H = -lambda_x sum X_j - lambda_z sum Z_j - sum X_j X_{j+1}.
/// Declares spin-flip parity iff lambda_x = 0. Zero-coupling field groups
/// are omitted so the downstream ansatz carries no dead parameters.
HamiltonianSpec build_ising(int num_sites, double lambda_x, double lambda_z);

/// H = -lambda_z sum Z_j - sum X_j X_{j+1}
///     + lambda_zxx sum (X_j X_{j+1} Z_{j+2} + Z_j X_{j+1} X_{j+2}).
/// Each three-body string is its own variational term; the family does not
/// commute internally, so its sublayer is Trotterized downstream.
HamiltonianSpec build_tci(int num_sites, double lambda_z, double lambda_zxx);

/// H = -sum (X_j X_{j+1} + Y_j Y_{j+1} + cos(gamma) Z_j Z_{j+1}).
/// ByPauli conserves spin-flip parity; U1 additionally conserves total
/// magnetization by fusing XX and YY into one bond term.
HamiltonianSpec build_xxz(int num_sites, double gamma, XxzGrouping grouping);

struct ValidationReport {
    struct GroupStatus {
        std::string label;
        bool intra_commuting;
        std::size_t term_count;
    };
    std::vector<GroupStatus> groups;
    std::vector<std::string> violations;
    std::size_t total_strings = 0;

    bool ok() const { return violations.empty(); }
};

/// Recomputes grouping properties from scratch and checks every declared
/// charge against every term; violations are reported, not thrown.
ValidationReport validate_spec(const HamiltonianSpec &spec);

} // namespace qprep
