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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qprep {

/// Single-site Pauli letter. Identity letters are never stored; a string's
/// support is exactly the set of sites carrying one of these.
enum class Pauli : std::uint8_t { X, Y, Z };

char to_char(Pauli p);

/// One Pauli letter attached to a site index.
struct SiteOp {
    int site;
    Pauli op;
};

/// A weighted tensor product of Pauli letters on a 1D chain.
///
/// Site 0 is the leftmost site. Basis index bit j corresponds to site j,
/// bit value 0 to the Z-up state (Z eigenvalue +1). Construction validates
/// the invariants: sites strictly increasing, nonempty support, nonzero
/// real coefficient.
class PauliString {
  public:
    PauliString(std::vector<SiteOp> ops, double coefficient);

    /// Builds a string from consecutive letters, e.g. ("XXZ", 3, c) places
    /// X on sites 3 and 4 and Z on site 5.
    static PauliString from_pattern(std::string_view letters, int start_site,
                                    double coefficient);

    const std::vector<SiteOp> &ops() const { return ops_; }
    double coefficient() const { return coefficient_; }
    int min_site() const { return ops_.front().site; }
    int max_site() const { return ops_.back().site; }
    std::size_t weight() const { return ops_.size(); }

    /// Count of X and Y letters; its parity decides spin-flip symmetry.
    int xy_count() const;

    /// Returns a copy with the coefficient replaced.
    PauliString with_coefficient(double c) const;

    /// Human-readable form such as "-1.0 * X0 X1 Z2".
    std::string str() const;

  private:
    std::vector<SiteOp> ops_;
    double coefficient_;
};

/// Conserved charges a Hamiltonian may declare. ProductZ is the global
/// spin-flip parity (product of Z over all sites); SumZ is total
/// magnetization (sum of Z over all sites).
enum class SymmetryCharge { ProductZ, SumZ };

/// Whether two weighted strings commute as operators. Coefficients are
/// irrelevant; the answer depends only on the parity of the number of
/// overlapping sites whose letters differ.
bool terms_commute(const PauliString &a, const PauliString &b);

/// Whether conjugation by the charge leaves the single string invariant,
/// i.e. the string commutes with the charge operator. For ProductZ this
/// holds iff the string has an even number of X/Y letters; for SumZ iff
/// it has none.
bool charge_preserved(SymmetryCharge charge, const PauliString &term);

inline constexpr int kDenseSiteLimit = 12;

/// Dense matrix of a sum of strings on an L-site chain, for cross-checking
/// small systems. Index convention matches the simulator: row/column index
/// bit j is site j. Rejects L above kDenseSiteLimit.
Eigen::MatrixXcd dense_matrix(std::span<const PauliString> terms, int num_sites);

inline Eigen::MatrixXcd dense_matrix(const PauliString &term, int num_sites) {
    return dense_matrix(std::span<const PauliString>(&term, 1), num_sites);
}

/// Dense matrix of the charge operator itself, same conventions.
Eigen::MatrixXcd dense_charge(SymmetryCharge charge, int num_sites);

} // namespace qprep
