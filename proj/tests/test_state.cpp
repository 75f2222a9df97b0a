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

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "qprep/model.hpp"
#include "qprep/state.hpp"

using namespace qprep;
using oracle::Complex;

namespace {

PauliString ps(std::string_view letters, int start, double c) {
    return PauliString::from_pattern(letters, start, c);
}

State state_from(const Eigen::VectorXcd &amps, int num_sites) {
    State s(num_sites);
    s.amps = amps;
    return s;
}

} // namespace

TEST_CASE("product_state places a single basis amplitude") {
    const State up = product_state(2);
    CHECK(up.num_sites == 2);
    CHECK(up.dim() == 4);
    CHECK(up.amps[0] == Complex(1.0));
    CHECK(up.amps.tail(3).cwiseAbs().maxCoeff() == 0.0);

    const std::vector<int> flips = {2};
    const State flipped = product_state(4, flips);
    CHECK(flipped.amps[4] == Complex(1.0));

    const std::vector<int> two = {0, 3};
    CHECK(product_state(4, two).amps[9] == Complex(1.0));
}

TEST_CASE("product_state validates flip sites") {
    const std::vector<int> bad_site = {4};
    CHECK_THROWS_AS(product_state(4, bad_site), std::invalid_argument);
    const std::vector<int> negative = {-1};
    CHECK_THROWS_AS(product_state(4, negative), std::invalid_argument);
    const std::vector<int> dup = {1, 1};
    CHECK_THROWS_AS(product_state(4, dup), std::invalid_argument);
}

TEST_CASE("flipping one site lands in the odd-parity sector") {
    const std::vector<int> flips = {6};
    const State psi = product_state(12, flips);
    CHECK(charge_expectation(psi, SymmetryCharge::ProductZ) ==
          doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(charge_expectation(psi, SymmetryCharge::SumZ) ==
          doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("kernel masks compile as documented") {
    const PauliKernel k = PauliKernel::compile(ps("XYZ", 0, -0.5));
    CHECK(k.flip_mask == 0b011);
    CHECK(k.phase_mask == 0b110);
    CHECK(k.y_count == 1);
    CHECK(k.coeff == -0.5);
}

TEST_CASE("generator exponential on hand-solved cases") {
    const State up2 = product_state(2);

    // exp(-i·0·K) is the identity.
    const State same = apply_generator_exp(up2, ps("XX", 0, -1.0), 0.0);
    CHECK((same.amps - up2.amps).norm() == 0.0);

    // exp(-i (pi/2) (-X0X1)) |up,up> = i |down,down>.
    const State bell = apply_generator_exp(up2, ps("XX", 0, -1.0), M_PI / 2);
    CHECK(std::abs(bell.amps[3] - Complex(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(bell.amps[0]) < 1e-15);

    // Diagonal generator only turns a phase: exp(-i t (-Z0)) |up> = e^{it}|up>.
    const double t = 0.7;
    const State phased = apply_generator_exp(product_state(1), ps("Z", 0, -1.0), t);
    CHECK(std::abs(phased.amps[0] - std::exp(Complex(0.0, t))) < 1e-15);

    // Equal-weight superposition at pi/4.
    const State mid = apply_generator_exp(up2, ps("XX", 0, -1.0), M_PI / 4);
    CHECK(std::abs(mid.amps[0] - Complex(std::sqrt(0.5), 0.0)) < 1e-15);
    CHECK(std::abs(mid.amps[3] - Complex(0.0, std::sqrt(0.5))) < 1e-15);
}

TEST_CASE("gate kernels match the dense exponential on every letter mix") {
    // Diagonal, even-Y and odd-Y strings exercise all three kernel paths.
    const std::vector<PauliString> generators = {
        ps("Z", 1, -1.0),   ps("ZZ", 0, 0.6),   ps("ZIZ", 0, -0.3),
        ps("X", 2, -0.8),   ps("XX", 1, -1.0),  ps("Y", 0, 0.5),
        ps("YY", 2, -1.0),  ps("XY", 0, 1.1),   ps("XYZ", 0, 0.428),
        ps("YXY", 1, -0.7), ps("XXZ", 0, 0.428)};

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> angle(-1.5, 1.5);
    const int num_sites = 4;
    for (const auto &g : generators) {
        const double theta = angle(rng);
        const Eigen::VectorXcd amps = oracle::random_amplitudes(num_sites, rng());
        const State psi = state_from(amps, num_sites);

        const State got = apply_generator_exp(psi, g, theta);
        const Eigen::VectorXcd want =
            oracle::expm_i(oracle::embed(g, num_sites), theta) * amps;

        CAPTURE(g.str());
        CHECK((got.amps - want).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(got.norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("gate angles compose additively") {
    const PauliString g = ps("XY", 1, -0.9);
    const Eigen::VectorXcd amps = oracle::random_amplitudes(3, 33);
    const State psi = state_from(amps, 3);

    const State two_step =
        apply_generator_exp(apply_generator_exp(psi, g, 0.3), g, 0.45);
    const State one_step = apply_generator_exp(psi, g, 0.75);
    CHECK((two_step.amps - one_step.amps).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("apply_pauli includes the coefficient") {
    const State up = product_state(1);
    const State minus = apply_pauli(up, ps("Z", 0, -1.0));
    CHECK(minus.amps[0] == Complex(-1.0));

    const State up3 = product_state(3);
    const State moved = apply_pauli(up3, ps("XXZ", 0, 0.428));
    CHECK(std::abs(moved.amps[3] - Complex(0.428)) < 1e-15);
    CHECK(moved.norm() == doctest::Approx(0.428).epsilon(1e-15));
}

TEST_CASE("pauli application kernels agree with dense multiplication") {
    std::mt19937_64 rng(55);
    const int num_sites = 4;
    for (int trial = 0; trial < 12; ++trial) {
        std::uniform_real_distribution<double> coeff(-2.0, 2.0);
        std::vector<SiteOp> ops;
        std::uniform_int_distribution<int> letter(0, 3);
        for (int site = 0; site < num_sites; ++site) {
            const int d = letter(rng);
            if (d == 1)
                ops.push_back({site, Pauli::X});
            else if (d == 2)
                ops.push_back({site, Pauli::Y});
            else if (d == 3)
                ops.push_back({site, Pauli::Z});
        }
        if (ops.empty())
            continue;
        const PauliString s(std::move(ops), coeff(rng));
        const PauliKernel k = PauliKernel::compile(s);
        const Eigen::MatrixXcd dense = oracle::embed(s, num_sites);
        const Eigen::VectorXcd amps = oracle::random_amplitudes(num_sites, rng());
        const State psi = state_from(amps, num_sites);

        // Functional application.
        const State prod = apply_pauli(psi, s);
        CHECK((prod.amps - dense * amps).cwiseAbs().maxCoeff() < 1e-13);

        // Accumulating kernel.
        Eigen::VectorXcd acc = Eigen::VectorXcd::Constant(amps.size(), Complex(0.25));
        const Eigen::VectorXcd acc_want = acc + 1.5 * (dense * amps);
        apply_pauli_axpy(acc, amps, k, 1.5);
        CHECK((acc - acc_want).cwiseAbs().maxCoeff() < 1e-13);

        // Overwriting kernel.
        State dst(num_sites);
        apply_pauli_into(dst, psi, k);
        CHECK((dst.amps - dense * amps).cwiseAbs().maxCoeff() < 1e-13);

        // Expectation kernel.
        const Complex want_exp = amps.dot(dense * amps);
        const Complex got_exp = expectation_kernel(psi, k);
        CHECK(std::abs(got_exp - want_exp) < 1e-13);
    }
}

TEST_CASE("overlap conjugates its second argument") {
    State psi = product_state(1);
    psi.amps[0] = Complex(0.0, 1.0);
    const State phi = product_state(1);
    CHECK(std::abs(overlap(psi, phi) - Complex(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(overlap(phi, psi) - Complex(0.0, -1.0)) < 1e-15);

    // Orthogonal states.
    const std::vector<int> f = {0};
    CHECK(std::abs(overlap(product_state(2), product_state(2, f))) == 0.0);
}

TEST_CASE("energy expectation on hand-solved states") {
    const HamiltonianSpec spec = build_ising(2, 0.0, 1.0);
    CHECK(expectation(product_state(2), spec) == doctest::Approx(-2.0).epsilon(1e-14));

    // Dense ground state gives the known minimum.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::spec_matrix(spec));
    const State gs = state_from(es.eigenvectors().col(0), 2);
    CHECK(expectation(gs, spec) == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-13));
}

TEST_CASE("energy expectation respects the variational bound") {
    const HamiltonianSpec spec = build_tci(4, 1.0, 0.428);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::spec_matrix(spec));
    const double e0 = es.eigenvalues()[0];
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const State psi = state_from(oracle::random_amplitudes(4, rng()), 4);
        CHECK(expectation(psi, spec) >= e0 - 1e-12);
    }
}

TEST_CASE("charge expectation on superpositions") {
    // (|up,up> + |down,down>)/sqrt(2): even parity, zero magnetization.
    State bell(2);
    bell.amps[0] = std::sqrt(0.5);
    bell.amps[3] = std::sqrt(0.5);
    CHECK(charge_expectation(bell, SymmetryCharge::ProductZ) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(charge_expectation(bell, SymmetryCharge::SumZ) ==
          doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("half-chain entropy on reference states") {
    CHECK(half_chain_entropy(product_state(4)) == doctest::Approx(0.0).epsilon(1e-12));

    State bell(2);
    bell.amps[0] = std::sqrt(0.5);
    bell.amps[3] = std::sqrt(0.5);
    CHECK(half_chain_entropy(bell) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    State ghz(8);
    ghz.amps[0] = std::sqrt(0.5);
    ghz.amps[255] = std::sqrt(0.5);
    CHECK(half_chain_entropy(ghz) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(half_chain_entropy(product_state(3)), std::invalid_argument);
}

TEST_CASE("entropy is invariant under phases and half-local rotations") {
    const Eigen::VectorXcd amps = oracle::random_amplitudes(4, 91);
    const State psi = state_from(amps, 4);
    const double s = half_chain_entropy(psi);

    const State phased = state_from(std::exp(Complex(0.0, 0.37)) * amps, 4);
    CHECK(half_chain_entropy(phased) == doctest::Approx(s).epsilon(1e-12));

    // A unitary acting inside the left half cannot change the cut spectrum.
    const State rotated = apply_generator_exp(psi, ps("XY", 0, 1.0), 0.61);
    CHECK(half_chain_entropy(rotated) == doctest::Approx(s).epsilon(1e-10));

    // Nor can one inside the right half.
    const State rotated_r = apply_generator_exp(psi, ps("YZ", 2, 1.0), -0.4);
    CHECK(half_chain_entropy(rotated_r) == doctest::Approx(s).epsilon(1e-10));
}
