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

#include "qprep/state.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qprep {

namespace {

inline double sign_of_parity(std::uint64_t bits) {
    return (std::popcount(bits) & 1) ? -1.0 : 1.0;
}

// Enumerates the pair representative with the pivot bit (the lowest flip
// bit) cleared: i runs over 2^{L-1} values, the pivot bit is reinserted.
inline std::uint64_t pair_index(std::uint64_t i, std::uint64_t lo_mask) {
    return ((i & ~lo_mask) << 1) | (i & lo_mask);
}

} // namespace

State product_state(int num_sites, std::span<const int> flips) {
    if (num_sites < 1 || num_sites > 24)
        throw std::invalid_argument("product_state: unsupported site count");
    State psi(num_sites);
    std::uint64_t index = 0;
    for (const int site : flips) {
        if (site < 0 || site >= num_sites)
            throw std::invalid_argument("product_state: flip site out of range");
        const std::uint64_t bit = std::uint64_t{1} << site;
        if (index & bit)
            throw std::invalid_argument("product_state: duplicate flip site");
        index |= bit;
    }
    psi.amps[static_cast<Eigen::Index>(index)] = 1.0;
    return psi;
}

PauliKernel PauliKernel::compile(const PauliString &s) {
    PauliKernel k;
    k.coeff = s.coefficient();
    for (const auto &op : s.ops()) {
        const std::uint64_t bit = std::uint64_t{1} << op.site;
        if (op.op != Pauli::Z)
            k.flip_mask |= bit;
        if (op.op != Pauli::X)
            k.phase_mask |= bit;
        if (op.op == Pauli::Y)
            ++k.y_count;
    }
    return k;
}

void apply_exp_inplace(Eigen::VectorXcd &amps, const PauliKernel &k, double theta) {
    const double alpha = theta * k.coeff;
    if (alpha == 0.0)
        return;
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    const std::uint64_t dim = static_cast<std::uint64_t>(amps.size());
    std::complex<double> *amp = amps.data();

    if (k.flip_mask == 0) {
        // Z-only string: pure phase, eigenvalue ±1 selected per index.
        const std::complex<double> f_plus(c, -s);
        const std::complex<double> f_minus(c, s);
        const std::uint64_t zmask = k.phase_mask;
        for (std::uint64_t b = 0; b < dim; ++b)
            amp[b] *= (std::popcount(b & zmask) & 1) ? f_minus : f_plus;
        return;
    }

    const std::uint64_t flip = k.flip_mask;
    const std::uint64_t zy = k.phase_mask;
    const std::uint64_t lo_mask =
        (std::uint64_t{1} << std::countr_zero(flip)) - 1;
    const std::uint64_t half = dim >> 1;

    if ((k.y_count & 1) == 0) {
        // Both pair phases are the same real sign; the update mixes real
        // and imaginary parts through multiplication by -i.
        const double base = (k.y_count & 2) ? -s : s;
        for (std::uint64_t i = 0; i < half; ++i) {
            const std::uint64_t a = pair_index(i, lo_mask);
            const std::uint64_t b = a ^ flip;
            const double w = (std::popcount(a & zy) & 1) ? -base : base;
            const std::complex<double> u = amp[a];
            const std::complex<double> v = amp[b];
            amp[a] = {c * u.real() + w * v.imag(), c * u.imag() - w * v.real()};
            amp[b] = {c * v.real() + w * u.imag(), c * v.imag() - w * u.real()};
        }
    } else {
        // Odd Y count: -i · i^{±1} is real, so the rotation is a real
        // Givens mix with antisymmetric signs between the two partners.
        const double tau = ((k.y_count & 3) == 1) ? s : -s;
        for (std::uint64_t i = 0; i < half; ++i) {
            const std::uint64_t a = pair_index(i, lo_mask);
            const std::uint64_t b = a ^ flip;
            const double w = (std::popcount(a & zy) & 1) ? -tau : tau;
            const std::complex<double> u = amp[a];
            const std::complex<double> v = amp[b];
            amp[a] = {c * u.real() - w * v.real(), c * u.imag() - w * v.imag()};
            amp[b] = {c * v.real() + w * u.real(), c * v.imag() + w * u.imag()};
        }
    }
}

namespace {

inline std::complex<double> phase_times(const PauliKernel &k, std::uint64_t b,
                                        double scale) {
    const double sgn = (std::popcount(b & k.phase_mask) & 1) ? -scale : scale;
    switch (k.y_count & 3) {
    case 0:
        return {sgn, 0.0};
    case 1:
        return {0.0, sgn};
    case 2:
        return {-sgn, 0.0};
    default:
        return {0.0, -sgn};
    }
}

} // namespace

void apply_pauli_into(State &dst, const State &src, const PauliKernel &k) {
    const std::uint64_t dim = static_cast<std::uint64_t>(src.dim());
    dst.num_sites = src.num_sites;
    if (dst.amps.size() != src.amps.size())
        dst.amps.resize(src.amps.size());
    const std::complex<double> *in = src.amps.data();
    std::complex<double> *out = dst.amps.data();
    for (std::uint64_t b = 0; b < dim; ++b)
        out[b ^ k.flip_mask] = phase_times(k, b, k.coeff) * in[b];
}

void apply_pauli_axpy(Eigen::VectorXcd &dst, const Eigen::VectorXcd &src,
                      const PauliKernel &k, double scale) {
    const std::uint64_t dim = static_cast<std::uint64_t>(src.size());
    const std::complex<double> *in = src.data();
    std::complex<double> *out = dst.data();
    const double factor = k.coeff * scale;
    for (std::uint64_t b = 0; b < dim; ++b)
        out[b ^ k.flip_mask] += phase_times(k, b, factor) * in[b];
}

std::complex<double> expectation_kernel(const State &psi, const PauliKernel &k) {
    const std::uint64_t dim = static_cast<std::uint64_t>(psi.dim());
    const std::complex<double> *amp = psi.amps.data();
    std::complex<double> acc = 0.0;
    for (std::uint64_t b = 0; b < dim; ++b)
        acc += std::conj(amp[b ^ k.flip_mask]) * phase_times(k, b, k.coeff) * amp[b];
    return acc;
}

State apply_generator_exp(const State &psi, const PauliString &k, double theta) {
    if (k.max_site() >= psi.num_sites)
        throw std::invalid_argument("apply_generator_exp: support exceeds chain");
    State out = psi;
    apply_exp_inplace(out, PauliKernel::compile(k), theta);
    return out;
}

State apply_pauli(const State &psi, const PauliString &k) {
    if (k.max_site() >= psi.num_sites)
        throw std::invalid_argument("apply_pauli: support exceeds chain");
    State out(psi.num_sites);
    apply_pauli_into(out, psi, PauliKernel::compile(k));
    return out;
}

std::complex<double> overlap(const State &psi, const State &phi) {
    if (psi.num_sites != phi.num_sites)
        throw std::invalid_argument("overlap: size mismatch");
    return phi.amps.dot(psi.amps);
}

double expectation(const State &psi, const HamiltonianSpec &spec) {
    if (spec.num_sites != psi.num_sites)
        throw std::invalid_argument("expectation: size mismatch");
    std::complex<double> acc = 0.0;
    for (const auto &group : spec.groups)
        for (const auto &term : group.terms)
            for (const auto &s : term.strings)
                acc += expectation_kernel(psi, PauliKernel::compile(s));
    if (std::abs(acc.imag()) > 1e-10)
        throw std::runtime_error("expectation: imaginary residue above tolerance");
    return acc.real();
}

double charge_expectation(const State &psi, SymmetryCharge q) {
    const std::uint64_t dim = static_cast<std::uint64_t>(psi.dim());
    const std::complex<double> *amp = psi.amps.data();
    double acc = 0.0;
    if (q == SymmetryCharge::ProductZ) {
        for (std::uint64_t b = 0; b < dim; ++b) {
            const double w = std::norm(amp[b]);
            acc += (std::popcount(b) & 1) ? -w : w;
        }
    } else {
        const int L = psi.num_sites;
        for (std::uint64_t b = 0; b < dim; ++b)
            acc += std::norm(amp[b]) * static_cast<double>(L - 2 * std::popcount(b));
    }
    return acc;
}

double half_chain_entropy(const State &psi) {
    if (psi.num_sites % 2 != 0)
        throw std::invalid_argument("half_chain_entropy: odd site count");
    const Eigen::Index dl = Eigen::Index{1} << (psi.num_sites / 2);
    // Left-half sites are the low bits, so the natural column-major view
    // has rows indexed by the left block.
    Eigen::Map<const Eigen::MatrixXcd> m(psi.amps.data(), dl, dl);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    double entropy = 0.0;
    for (const double s : svd.singularValues()) {
        const double p = s * s;
        if (p > 1e-15)
            entropy -= p * std::log(p);
    }
    return entropy;
}

} // namespace qprep
