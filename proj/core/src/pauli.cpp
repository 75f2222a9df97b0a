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

#include "qprep/pauli.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qprep {

char to_char(Pauli p) {
    switch (p) {
    case Pauli::X:
        return 'X';
    case Pauli::Y:
        return 'Y';
    case Pauli::Z:
        return 'Z';
    }
    throw std::logic_error("invalid Pauli letter");
}

PauliString::PauliString(std::vector<SiteOp> ops, double coefficient)
    : ops_(std::move(ops)), coefficient_(coefficient) {
    if (ops_.empty())
        throw std::invalid_argument("PauliString: empty support");
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        if (ops_[i].site < 0)
            throw std::invalid_argument("PauliString: negative site index");
        if (i > 0 && ops_[i].site <= ops_[i - 1].site)
            throw std::invalid_argument(
                "PauliString: sites must be strictly increasing");
    }
    if (coefficient_ == 0.0 || !std::isfinite(coefficient_))
        throw std::invalid_argument("PauliString: coefficient must be finite and nonzero");
}

PauliString PauliString::from_pattern(std::string_view letters, int start_site,
                                      double coefficient) {
    std::vector<SiteOp> ops;
    ops.reserve(letters.size());
    for (std::size_t i = 0; i < letters.size(); ++i) {
        const int site = start_site + static_cast<int>(i);
        switch (letters[i]) {
        case 'X':
            ops.push_back({site, Pauli::X});
            break;
        case 'Y':
            ops.push_back({site, Pauli::Y});
            break;
        case 'Z':
            ops.push_back({site, Pauli::Z});
            break;
        case 'I':
            break;
        default:
            throw std::invalid_argument("PauliString: unknown letter in pattern");
        }
    }
    return PauliString(std::move(ops), coefficient);
}

int PauliString::xy_count() const {
    int n = 0;
    for (const auto &op : ops_)
        if (op.op != Pauli::Z)
            ++n;
    return n;
}

PauliString PauliString::with_coefficient(double c) const {
    return PauliString(ops_, c);
}

std::string PauliString::str() const {
    std::ostringstream out;
    out << coefficient_ << " *";
    for (const auto &op : ops_)
        out << ' ' << to_char(op.op) << op.site;
    return out.str();
}

bool terms_commute(const PauliString &a, const PauliString &b) {
    // Letters on disjoint sites commute; each overlapping site with
    // differing letters contributes one anticommuting factor.
    int anticommuting = 0;
    auto ia = a.ops().begin(), ib = b.ops().begin();
    while (ia != a.ops().end() && ib != b.ops().end()) {
        if (ia->site < ib->site) {
            ++ia;
        } else if (ib->site < ia->site) {
            ++ib;
        } else {
            if (ia->op != ib->op)
                ++anticommuting;
            ++ia;
            ++ib;
        }
    }
    return anticommuting % 2 == 0;
}

bool charge_preserved(SymmetryCharge charge, const PauliString &term) {
    switch (charge) {
    case SymmetryCharge::ProductZ:
        return term.xy_count() % 2 == 0;
    case SymmetryCharge::SumZ:
        return term.xy_count() == 0;
    }
    throw std::logic_error("invalid SymmetryCharge");
}

namespace {

struct StringMasks {
    std::uint64_t flip;  // bits set where the letter is X or Y
    std::uint64_t phase; // bits set where the letter is Z or Y
    int y_count;
};

StringMasks masks_of(const PauliString &term) {
    StringMasks m{0, 0, 0};
    for (const auto &op : term.ops()) {
        const std::uint64_t bit = std::uint64_t{1} << op.site;
        if (op.op != Pauli::Z)
            m.flip |= bit;
        if (op.op != Pauli::X)
            m.phase |= bit;
        if (op.op == Pauli::Y)
            ++m.y_count;
    }
    return m;
}

std::complex<double> i_power(int n) {
    switch (((n % 4) + 4) % 4) {
    case 0:
        return {1.0, 0.0};
    case 1:
        return {0.0, 1.0};
    case 2:
        return {-1.0, 0.0};
    default:
        return {0.0, -1.0};
    }
}

} // namespace

Eigen::MatrixXcd dense_matrix(std::span<const PauliString> terms, int num_sites) {
    if (num_sites < 1 || num_sites > kDenseSiteLimit)
        throw std::invalid_argument("dense_matrix: site count out of range");
    const std::uint64_t dim = std::uint64_t{1} << num_sites;
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(dim));
    for (const auto &term : terms) {
        if (term.max_site() >= num_sites)
            throw std::invalid_argument("dense_matrix: term support exceeds chain");
        const StringMasks m = masks_of(term);
        const std::complex<double> prefactor = term.coefficient() * i_power(m.y_count);
        for (std::uint64_t b = 0; b < dim; ++b) {
            const int parity = std::popcount(b & m.phase) & 1;
            const std::complex<double> amp = parity ? -prefactor : prefactor;
            mat(static_cast<Eigen::Index>(b ^ m.flip), static_cast<Eigen::Index>(b)) += amp;
        }
    }
    return mat;
}

Eigen::MatrixXcd dense_charge(SymmetryCharge charge, int num_sites) {
    if (num_sites < 1 || num_sites > kDenseSiteLimit)
        throw std::invalid_argument("dense_charge: site count out of range");
    const std::uint64_t dim = std::uint64_t{1} << num_sites;
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(dim));
    for (std::uint64_t b = 0; b < dim; ++b) {
        const int ones = std::popcount(b);
        double value = 0.0;
        if (charge == SymmetryCharge::ProductZ)
            value = (ones & 1) ? -1.0 : 1.0;
        else
            value = static_cast<double>(num_sites - 2 * ones);
        mat(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = value;
    }
    return mat;
}

} // namespace qprep
