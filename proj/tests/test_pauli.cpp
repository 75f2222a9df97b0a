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
#include <random>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "qprep/pauli.hpp"

using namespace qprep;

namespace {

PauliString ps(std::string_view letters, int start, double c) {
    return PauliString::from_pattern(letters, start, c);
}

/// All non-identity strings on num_sites sites, coefficient 1, encoded as
/// base-4 digit vectors (0 = identity letter, skipped).
std::vector<PauliString> all_strings(int num_sites) {
    const int total = 1 << (2 * num_sites);
    std::vector<PauliString> out;
    out.reserve(total - 1);
    for (int code = 1; code < total; ++code) {
        std::vector<SiteOp> ops;
        int c = code;
        for (int site = 0; site < num_sites; ++site) {
            const int digit = c & 3;
            c >>= 2;
            if (digit == 1)
                ops.push_back({site, Pauli::X});
            else if (digit == 2)
                ops.push_back({site, Pauli::Y});
            else if (digit == 3)
                ops.push_back({site, Pauli::Z});
        }
        if (!ops.empty())
            out.emplace_back(std::move(ops), 1.0);
    }
    return out;
}

PauliString random_string(int num_sites, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> letter(0, 3);
    std::vector<SiteOp> ops;
    while (ops.empty()) {
        ops.clear();
        for (int site = 0; site < num_sites; ++site) {
            const int d = letter(rng);
            if (d == 1)
                ops.push_back({site, Pauli::X});
            else if (d == 2)
                ops.push_back({site, Pauli::Y});
            else if (d == 3)
                ops.push_back({site, Pauli::Z});
        }
    }
    return PauliString(std::move(ops), 1.0);
}

} // namespace

TEST_CASE("construction validates support and coefficient") {
    CHECK_THROWS_AS(PauliString({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PauliString({{0, Pauli::X}}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PauliString({{0, Pauli::X}}, std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(PauliString({{-1, Pauli::X}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PauliString({{1, Pauli::X}, {1, Pauli::Z}}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(PauliString({{2, Pauli::X}, {1, Pauli::Z}}, 1.0),
                    std::invalid_argument);

    const PauliString s({{0, Pauli::X}, {3, Pauli::Y}}, -0.5);
    CHECK(s.weight() == 2);
    CHECK(s.min_site() == 0);
    CHECK(s.max_site() == 3);
    CHECK(s.coefficient() == -0.5);
    CHECK(s.with_coefficient(2.0).coefficient() == 2.0);
}

TEST_CASE("from_pattern places consecutive letters and skips identity") {
    const PauliString s = ps("XXZ", 3, -1.0);
    REQUIRE(s.ops().size() == 3);
    CHECK(s.ops()[0].site == 3);
    CHECK(s.ops()[0].op == Pauli::X);
    CHECK(s.ops()[1].site == 4);
    CHECK(s.ops()[1].op == Pauli::X);
    CHECK(s.ops()[2].site == 5);
    CHECK(s.ops()[2].op == Pauli::Z);

    const PauliString t = ps("XIZ", 0, 1.0);
    REQUIRE(t.ops().size() == 2);
    CHECK(t.ops()[0].site == 0);
    CHECK(t.ops()[1].site == 2);
    CHECK(t.ops()[1].op == Pauli::Z);

    CHECK_THROWS_AS(ps("XQ", 0, 1.0), std::invalid_argument);
}

TEST_CASE("xy_count counts non-Z letters") {
    CHECK(ps("XYZ", 0, 1.0).xy_count() == 2);
    CHECK(ps("ZZ", 0, 1.0).xy_count() == 0);
    CHECK(ps("XX", 0, 1.0).xy_count() == 2);
    CHECK(ps("Y", 0, 1.0).xy_count() == 1);
}

TEST_CASE("terms_commute on known pairs") {
    CHECK(terms_commute(ps("Z", 0, 1.0), ps("Z", 0, 1.0)));
    CHECK_FALSE(terms_commute(ps("XX", 0, 1.0), ps("Z", 1, 1.0)));
    // Two overlapping differing letters: contributions cancel pairwise.
    CHECK(terms_commute(ps("XXZ", 0, 1.0), ps("ZXX", 0, 1.0)));
    // One overlapping differing letter.
    CHECK_FALSE(terms_commute(ps("XXZ", 0, 1.0), ps("XXZ", 1, 1.0)));
    // Disjoint support always commutes.
    CHECK(terms_commute(ps("XY", 0, 1.0), ps("ZX", 2, 1.0)));
    // Coefficients are irrelevant.
    CHECK_FALSE(terms_commute(ps("X", 0, -3.0), ps("Y", 0, 0.25)));
}

TEST_CASE("terms_commute agrees with the dense commutator on every pair, 4 sites") {
    for (int num_sites = 1; num_sites <= 4; ++num_sites) {
        const auto strings = all_strings(num_sites);
        std::vector<Eigen::MatrixXcd> dense;
        dense.reserve(strings.size());
        for (const auto &s : strings)
            dense.push_back(oracle::embed(s, num_sites));

        for (std::size_t i = 0; i < strings.size(); ++i) {
            for (std::size_t j = i; j < strings.size(); ++j) {
                const bool predicted = terms_commute(strings[i], strings[j]);
                const bool actual = oracle::comm_norm(dense[i], dense[j]) < 1e-12;
                if (predicted != actual) {
                    CAPTURE(strings[i].str());
                    CAPTURE(strings[j].str());
                    REQUIRE(predicted == actual);
                }
            }
        }
    }
}

TEST_CASE("charge_preserved matches the dense charge commutator") {
    const auto check_one = [](const PauliString &s, int num_sites) {
        const Eigen::MatrixXcd m = oracle::embed(s, num_sites);
        for (SymmetryCharge q : {SymmetryCharge::ProductZ, SymmetryCharge::SumZ}) {
            const Eigen::MatrixXcd qm = dense_charge(q, num_sites);
            const bool predicted = charge_preserved(q, s);
            const bool actual = oracle::comm_norm(qm, m) < 1e-12;
            CAPTURE(s.str());
            REQUIRE(predicted == actual);
        }
    };

    for (int num_sites = 1; num_sites <= 4; ++num_sites)
        for (const auto &s : all_strings(num_sites))
            check_one(s, num_sites);

    std::mt19937_64 rng(7);
    for (int num_sites : {5, 6})
        for (int trial = 0; trial < 200; ++trial)
            check_one(random_string(num_sites, rng), num_sites);
}

TEST_CASE("charge rules on named examples") {
    CHECK(charge_preserved(SymmetryCharge::ProductZ, ps("XX", 0, -1.0)));
    CHECK_FALSE(charge_preserved(SymmetryCharge::ProductZ, ps("X", 0, -1.0)));
    CHECK(charge_preserved(SymmetryCharge::ProductZ, ps("XXZ", 0, 0.428)));
    CHECK(charge_preserved(SymmetryCharge::SumZ, ps("Z", 3, -1.0)));
    CHECK_FALSE(charge_preserved(SymmetryCharge::SumZ, ps("XX", 0, -1.0)));
    CHECK_FALSE(charge_preserved(SymmetryCharge::SumZ, ps("XY", 0, 1.0)));
}

TEST_CASE("dense_matrix single-string conventions") {
    const Eigen::MatrixXcd mz = dense_matrix(ps("Z", 0, -1.0), 1);
    REQUIRE(mz.rows() == 2);
    CHECK(std::abs(mz(0, 0) - oracle::Complex(-1.0)) < 1e-15);
    CHECK(std::abs(mz(1, 1) - oracle::Complex(1.0)) < 1e-15);
    CHECK(std::abs(mz(0, 1)) < 1e-15);
    CHECK(std::abs(mz(1, 0)) < 1e-15);

    const Eigen::MatrixXcd mxx = dense_matrix(ps("XX", 0, -1.0), 2);
    REQUIRE(mxx.rows() == 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const oracle::Complex want = (r + c == 3) ? -1.0 : 0.0;
            CHECK(std::abs(mxx(r, c) - want) < 1e-15);
        }
}

TEST_CASE("dense_matrix agrees with the Kronecker oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int num_sites = 1; num_sites <= 4; ++num_sites) {
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<PauliString> terms;
            for (int t = 0; t < 3; ++t)
                terms.push_back(
                    random_string(num_sites, rng).with_coefficient(coeff(rng)));
            const Eigen::MatrixXcd got = dense_matrix(terms, num_sites);
            const Eigen::MatrixXcd want = oracle::embed_sum(terms, num_sites);
            CHECK((got - want).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("dense_matrix of real-weighted strings is Hermitian") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<PauliString> terms;
        for (int t = 0; t < 4; ++t)
            terms.push_back(random_string(4, rng).with_coefficient(coeff(rng)));
        const Eigen::MatrixXcd h = dense_matrix(terms, 4);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("dense_matrix rejects oversized chains and out-of-range strings") {
    CHECK_THROWS_AS(dense_matrix(ps("Z", 0, 1.0), kDenseSiteLimit + 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(dense_matrix(ps("Z", 5, 1.0), 3), std::invalid_argument);
}

TEST_CASE("two-site transverse-field chain has the known spectrum") {
    // H = -X0X1 - Z0 - Z1; characteristic roots are -sqrt(5), -1, 1, sqrt(5).
    const std::vector<PauliString> terms = {ps("XX", 0, -1.0), ps("Z", 0, -1.0),
                                            ps("Z", 1, -1.0)};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(terms, 2));
    const Eigen::VectorXd ev = es.eigenvalues();
    const double r5 = std::sqrt(5.0);
    REQUIRE(ev.size() == 4);
    CHECK(ev[0] == doctest::Approx(-r5).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ev[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev[3] == doctest::Approx(r5).epsilon(1e-12));
}

TEST_CASE("dense_charge matches explicitly built charge operators") {
    for (int num_sites = 1; num_sites <= 5; ++num_sites) {
        std::vector<PauliString> zsum;
        for (int j = 0; j < num_sites; ++j)
            zsum.push_back(PauliString({{j, Pauli::Z}}, 1.0));
        const Eigen::MatrixXcd sum_want = oracle::embed_sum(zsum, num_sites);
        CHECK((dense_charge(SymmetryCharge::SumZ, num_sites) - sum_want)
                  .cwiseAbs()
                  .maxCoeff() < 1e-14);

        std::vector<SiteOp> all;
        for (int j = 0; j < num_sites; ++j)
            all.push_back({j, Pauli::Z});
        const Eigen::MatrixXcd prod_want =
            oracle::embed(PauliString(all, 1.0), num_sites);
        CHECK((dense_charge(SymmetryCharge::ProductZ, num_sites) - prod_want)
                  .cwiseAbs()
                  .maxCoeff() < 1e-14);
    }
}
