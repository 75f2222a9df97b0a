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

#include "qprep/eigensolver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace qprep {

namespace {

constexpr Eigen::Index kDenseSectorLimit = 2048;
constexpr double kResidualTol = 1e-9;
constexpr double kDegeneracyTol = 1e-10;

// Real mask form of a Pauli string. Only even-Y strings embed as real
// matrices in the computational basis; every model built here qualifies.
struct RealKernel {
    std::uint64_t flip;
    std::uint64_t sign_mask;
    double coeff;
};

std::vector<RealKernel> real_kernels(const HamiltonianSpec &spec) {
    std::vector<RealKernel> out;
    for (const auto &s : spec.all_strings()) {
        const PauliKernel k = PauliKernel::compile(s);
        if (k.y_count & 1)
            throw std::invalid_argument(
                "eigensolver: Hamiltonian is not real in the computational basis");
        const double folded = (k.y_count & 2) ? -k.coeff : k.coeff;
        out.push_back({k.flip_mask, k.phase_mask, folded});
    }
    return out;
}

void matvec(const std::vector<RealKernel> &kernels, const Eigen::VectorXd &x,
            Eigen::VectorXd &y) {
    const std::uint64_t dim = static_cast<std::uint64_t>(x.size());
    y.setZero();
    const double *in = x.data();
    double *out = y.data();
    for (const auto &k : kernels) {
        if (k.flip == 0) {
            for (std::uint64_t b = 0; b < dim; ++b) {
                const double w = (std::popcount(b & k.sign_mask) & 1) ? -k.coeff : k.coeff;
                out[b] += w * in[b];
            }
        } else {
            for (std::uint64_t b = 0; b < dim; ++b) {
                const double w = (std::popcount(b & k.sign_mask) & 1) ? -k.coeff : k.coeff;
                out[b ^ k.flip] += w * in[b];
            }
        }
    }
}

// Deterministic pseudo-random start vector; raw engine output is mapped
// to doubles directly so results do not depend on distribution internals.
Eigen::VectorXd seeded_vector(Eigen::Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ seed);
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        v[i] = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
    return v;
}

struct LanczosOptions {
    int max_basis = 350;
    double tol = 1e-11;
};

// Lowest eigenpair by Lanczos with full reorthogonalization. `constrain`
// re-imposes the invariant subspace (sector projection and deflation
// against already-found eigenvectors) on every generated vector.
std::pair<double, Eigen::VectorXd>
lanczos_lowest(const std::vector<RealKernel> &kernels, Eigen::Index dim,
               const std::function<void(Eigen::VectorXd &)> &constrain,
               std::uint64_t seed, const LanczosOptions &opts = {}) {
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;
    Eigen::VectorXd v = seeded_vector(dim, seed);
    constrain(v);
    double nrm = v.norm();
    if (nrm < 1e-8)
        throw std::runtime_error("lanczos: start vector annihilated by constraints");
    v /= nrm;
    basis.push_back(v);

    Eigen::VectorXd w(dim);
    const auto reorthogonalize = [&](Eigen::VectorXd &u) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto &b : basis)
                u -= b.dot(u) * b;
    };

    for (int j = 0; j < opts.max_basis; ++j) {
        matvec(kernels, basis.back(), w);
        constrain(w);
        alpha.push_back(basis.back().dot(w));
        w -= alpha[j] * basis.back();
        if (j > 0)
            w -= beta[j - 1] * basis[j - 1];
        reorthogonalize(w);
        const double b = w.norm();

        const bool basis_exhausted = b < 1e-13;
        if (basis_exhausted || (j + 1) % 10 == 0 || j + 1 == opts.max_basis) {
            // Basis has m vectors, so beta holds exactly m-1 couplings;
            // the fresh b couples only to the not-yet-appended vector and
            // enters through the residual bound.
            const int m = j + 1;
            Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                tri(i, i) = alpha[i];
                if (i + 1 < m)
                    tri(i, i + 1) = tri(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
            const double theta = es.eigenvalues()[0];
            const double bound = b * std::abs(es.eigenvectors()(m - 1, 0));
            if (basis_exhausted || bound < opts.tol * std::max(1.0, std::abs(theta))) {
                Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
                for (int i = 0; i < m; ++i)
                    x += es.eigenvectors()(i, 0) * basis[i];
                constrain(x);
                x.normalize();
                return {theta, x};
            }
        }
        if (basis_exhausted)
            break;
        beta.push_back(b);
        basis.push_back(w / b);
    }
    throw std::runtime_error("lanczos: no convergence within the basis budget");
}

void fix_phase(Eigen::VectorXcd &v) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::norm(v[i]);
        if (a > best + 1e-18) {
            best = a;
            imax = i;
        }
    }
    const std::complex<double> pivot = v[imax];
    if (std::abs(pivot) > 0.0)
        v *= std::conj(pivot) / std::abs(pivot);
}

void check_residual(const std::vector<RealKernel> &kernels, const Eigen::VectorXd &x,
                    double energy) {
    Eigen::VectorXd hx(x.size());
    matvec(kernels, x, hx);
    const double res = (hx - energy * x).norm();
    if (res > kResidualTol)
        throw std::runtime_error("eigensolver: residual above tolerance");
}

TargetState make_target(int num_sites, const Eigen::VectorXd &vec, double energy,
                        std::optional<int> q, int index) {
    TargetState t;
    t.state = State(num_sites);
    t.state.amps = vec.cast<std::complex<double>>();
    fix_phase(t.state.amps);
    t.energy = energy;
    t.sector_charge = q;
    t.index_in_sector = index;
    return t;
}

// Shared driver: sector-restricted when q has a value, full-space
// otherwise. Computes one extra level where possible so the last
// requested state gets a degeneracy verdict.
std::vector<TargetState> solve_lowest(const HamiltonianSpec &spec,
                                      std::optional<int> q, int k) {
    const int L = spec.num_sites;
    if (L < 1 || L > 16)
        throw std::invalid_argument("eigensolver: site count out of range");
    if (k < 1)
        throw std::invalid_argument("eigensolver: need k >= 1");
    const std::vector<RealKernel> kernels = real_kernels(spec);
    const std::uint64_t dim_full = std::uint64_t{1} << L;

    std::vector<std::uint64_t> sector;
    if (q) {
        if (*q != 1 && *q != -1)
            throw std::invalid_argument("eigensolver: sector charge must be +1 or -1");
        sector = sector_indices(L, *q);
    } else {
        sector.resize(dim_full);
        for (std::uint64_t b = 0; b < dim_full; ++b)
            sector[b] = b;
    }
    const Eigen::Index dim_s = static_cast<Eigen::Index>(sector.size());
    if (k > dim_s)
        throw std::invalid_argument("eigensolver: k exceeds sector dimension");
    const int want = static_cast<int>(std::min<Eigen::Index>(k + 1, dim_s));

    std::vector<double> energies;
    std::vector<Eigen::VectorXd> vectors;

    if (dim_s <= kDenseSectorLimit) {
        std::vector<Eigen::Index> pos(dim_full, -1);
        for (Eigen::Index i = 0; i < dim_s; ++i)
            pos[sector[i]] = i;
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_s, dim_s);
        for (const auto &kern : kernels) {
            for (Eigen::Index c = 0; c < dim_s; ++c) {
                const std::uint64_t b = sector[c];
                const Eigen::Index r = pos[b ^ kern.flip];
                if (r < 0)
                    throw std::invalid_argument(
                        "eigensolver: Hamiltonian does not preserve the sector");
                const double w =
                    (std::popcount(b & kern.sign_mask) & 1) ? -kern.coeff : kern.coeff;
                h(r, c) += w;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        for (int i = 0; i < want; ++i) {
            energies.push_back(es.eigenvalues()[i]);
            Eigen::VectorXd full = Eigen::VectorXd::Zero(dim_full);
            for (Eigen::Index r = 0; r < dim_s; ++r)
                full[sector[r]] = es.eigenvectors()(r, i);
            vectors.push_back(std::move(full));
        }
    } else {
        const std::optional<int> parity = q;
        for (int i = 0; i < want; ++i) {
            const auto constrain = [&](Eigen::VectorXd &u) {
                if (parity) {
                    const int keep = (*parity == 1) ? 0 : 1;
                    for (std::uint64_t b = 0; b < dim_full; ++b)
                        if ((std::popcount(b) & 1) != keep)
                            u[b] = 0.0;
                }
                for (const auto &found : vectors)
                    u -= found.dot(u) * found;
            };
            auto [value, vec] =
                lanczos_lowest(kernels, static_cast<Eigen::Index>(dim_full), constrain,
                               static_cast<std::uint64_t>(i));
            energies.push_back(value);
            vectors.push_back(std::move(vec));
        }
        // Deflated solves can return levels out of order when separations
        // are tiny; enforce ascending energies.
        std::vector<int> order(want);
        for (int i = 0; i < want; ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return energies[a] < energies[b]; });
        std::vector<double> e2;
        std::vector<Eigen::VectorXd> v2;
        for (int i : order) {
            e2.push_back(energies[i]);
            v2.push_back(std::move(vectors[i]));
        }
        energies = std::move(e2);
        vectors = std::move(v2);
    }

    std::vector<TargetState> out;
    const int given = std::min(k, want);
    for (int i = 0; i < given; ++i) {
        check_residual(kernels, vectors[i], energies[i]);
        TargetState t = make_target(L, vectors[i], energies[i], q, i);
        const bool low = i > 0 && energies[i] - energies[i - 1] < kDegeneracyTol;
        const bool high =
            i + 1 < want && energies[i + 1] - energies[i] < kDegeneracyTol;
        t.degenerate = low || high;
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace

std::vector<std::uint64_t> sector_indices(int num_sites, int q) {
    if (q != 1 && q != -1)
        throw std::invalid_argument("sector_indices: charge must be +1 or -1");
    const std::uint64_t dim = std::uint64_t{1} << num_sites;
    const int want = (q == 1) ? 0 : 1;
    std::vector<std::uint64_t> out;
    out.reserve(dim / 2);
    for (std::uint64_t b = 0; b < dim; ++b)
        if ((std::popcount(b) & 1) == want)
            out.push_back(b);
    return out;
}

std::vector<TargetState> eigenstates(const HamiltonianSpec &spec, int q, int k) {
    if (!spec.conserves(SymmetryCharge::ProductZ))
        throw std::invalid_argument(
            "eigenstates: spec does not conserve spin-flip parity; "
            "use eigenstates_full");
    return solve_lowest(spec, q, k);
}

std::vector<TargetState> eigenstates_full(const HamiltonianSpec &spec, int k) {
    return solve_lowest(spec, std::nullopt, k);
}

std::vector<double> dense_spectrum(const HamiltonianSpec &spec) {
    const auto strings = spec.all_strings();
    const Eigen::MatrixXcd h =
        dense_matrix(std::span<const PauliString>(strings), spec.num_sites);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    std::vector<double> out(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
    return out;
}

double correlation_length(double lambda_x, double lambda_z, int num_sites) {
    if (lambda_x <= 0.0)
        throw std::invalid_argument("correlation_length: requires lambda_x > 0");
    const HamiltonianSpec spec = build_ising(num_sites, lambda_x, lambda_z);
    const TargetState ground = eigenstates_full(spec, 1).front();

    const auto x_at = [&](int j) {
        return expectation_kernel(ground.state,
                                  PauliKernel::compile(PauliString::from_pattern("X", j, 1.0)))
            .real();
    };
    const auto xx_at = [&](int j, int r) {
        PauliString s({{j, Pauli::X}, {j + r, Pauli::X}}, 1.0);
        return expectation_kernel(ground.state, PauliKernel::compile(s)).real();
    };

    // Centered pairs with a two-site boundary buffer.
    const int buffer = 2;
    std::vector<double> rs, logs;
    for (int r = 1; r <= num_sites - 2 * buffer - 1; ++r) {
        const int j = (num_sites - 1 - r) / 2;
        if (j < buffer || j + r > num_sites - 1 - buffer)
            continue;
        const double c = xx_at(j, r) - x_at(j) * x_at(j + r);
        if (c <= 1e-13)
            break;
        rs.push_back(static_cast<double>(r));
        logs.push_back(std::log(c));
    }
    if (rs.size() < 3)
        throw std::runtime_error("correlation_length: fewer than 3 usable fit points");

    const double n = static_cast<double>(rs.size());
    double sr = 0, sl = 0, srr = 0, srl = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        sr += rs[i];
        sl += logs[i];
        srr += rs[i] * rs[i];
        srl += rs[i] * logs[i];
    }
    const double slope = (n * srl - sr * sl) / (n * srr - sr * sr);
    if (!(slope < 0.0))
        throw std::runtime_error("correlation_length: correlator does not decay");
    return -1.0 / slope;
}

} // namespace qprep
