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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "qprep/circuit.hpp"
#include "qprep/eigensolver.hpp"

using namespace qprep;
using oracle::Complex;

namespace {

State random_input(int num_sites, std::uint64_t seed) {
    State s(num_sites);
    s.amps = oracle::random_amplitudes(num_sites, seed);
    return s;
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const char *name)
        : path(std::filesystem::temp_directory_path() / name) {}
    ~TempFile() { std::filesystem::remove(path); }
};

} // namespace

TEST_CASE("parameter counts follow layers times term count") {
    CHECK(Ansatz(build_ising(4, 0.0, 1.0), 2).parameter_count() == 14);
    CHECK(Ansatz(build_ising(4, 0.06, 1.0), 2).parameter_count() == 22);
    CHECK(Ansatz(build_tci(4, 1.0, 0.428), 1).parameter_count() == 11);
    CHECK(Ansatz(build_xxz(4, 0.5, XxzGrouping::U1), 2).parameter_count() == 12);

    AnsatzOptions tied;
    tied.tie_angles = true;
    CHECK(Ansatz(build_ising(4, 0.0, 1.0), 3, tied).parameter_count() == 6);
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(Ansatz(build_ising(4, 0.0, 1.0), 0), std::invalid_argument);
    AnsatzOptions bad;
    bad.trotter_order = 3;
    CHECK_THROWS_AS(Ansatz(build_ising(4, 0.0, 1.0), 1, bad), std::invalid_argument);
    CHECK_THROWS_AS(Ansatz(HamiltonianSpec{}, 1), std::invalid_argument);
}

TEST_CASE("parameter key lookup is a bijection") {
    const std::vector<Ansatz> ansatzes = {
        Ansatz(build_ising(4, 0.06, 1.0), 2),
        Ansatz(build_tci(4, 1.0, 0.428), 2),
        Ansatz(build_xxz(3, 0.5, XxzGrouping::U1), 1),
    };
    for (const auto &a : ansatzes) {
        const auto &keys = a.parameter_keys();
        REQUIRE(static_cast<int>(keys.size()) == a.parameter_count());
        for (int p = 0; p < a.parameter_count(); ++p)
            CHECK(a.parameter_index(keys[p]) == p);
    }
    CHECK_THROWS_AS(ansatzes[0].parameter_index(ParameterKey{9, 9, 9, 9}),
                    std::invalid_argument);
}

TEST_CASE("three-body variants get distinct keys at one anchor") {
    const Ansatz a(build_tci(5, 1.0, 0.428), 1);
    const int p0 = a.parameter_index(ParameterKey{0, 2, 1, 0});
    const int p1 = a.parameter_index(ParameterKey{0, 2, 1, 1});
    CHECK(p0 != p1);
}

TEST_CASE("sublayers run nearest-neighbour, on-site, next-nearest-neighbour") {
    const Ansatz tci(build_tci(4, 1.0, 0.428), 1);
    const auto &order = tci.group_order();
    REQUIRE(order.size() == 3);
    int prev = -1;
    for (int g : order) {
        const int rank = sublayer_rank(tci.spec().groups[g].locality);
        CHECK(rank >= prev);
        prev = rank;
    }

    // A spec declared in scrambled order is still applied bonds-first.
    HamiltonianSpec scrambled = build_ising(3, 0.0, 1.0);
    std::swap(scrambled.groups[0], scrambled.groups[1]);
    const Ansatz a(scrambled, 1);
    REQUIRE(a.group_order().size() == 2);
    CHECK(scrambled.groups[a.group_order()[0]].label == "XX");
    CHECK(scrambled.groups[a.group_order()[1]].label == "Z");
}

TEST_CASE("layer ranges and sublayer ends tile the gate list") {
    const Ansatz a(build_tci(4, 1.0, 0.428), 3);
    const int num_gates = static_cast<int>(a.gates().size());
    int cursor = 0;
    for (int l = 0; l < a.layers(); ++l) {
        const auto [b, e] = a.layer_gate_range(l);
        CHECK(b == cursor);
        CHECK(e > b);
        cursor = e;
    }
    CHECK(cursor == num_gates);
    CHECK(a.sublayer_ends().back() == num_gates);
    // One sublayer per group per layer.
    CHECK(a.sublayer_ends().size() == 3 * 3);
    CHECK_THROWS_AS(a.layer_gate_range(3), std::invalid_argument);
}

TEST_CASE("zero angles leave the input state untouched") {
    const Ansatz a(build_tci(4, 1.0, 0.428), 2);
    const State psi0 = random_input(4, 5);
    const State out =
        apply_circuit(a, Eigen::VectorXd::Zero(a.parameter_count()), psi0);
    CHECK((out.amps - psi0.amps).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("one bond gate makes the expected superposition") {
    const Ansatz a(build_ising(2, 0.0, 1.0), 1);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(a.parameter_count());
    theta[a.parameter_index(ParameterKey{0, 0, 0, 0})] = M_PI / 4;
    const State out = apply_circuit(a, theta, product_state(2));
    CHECK(std::abs(out.amps[0] - Complex(std::sqrt(0.5), 0.0)) < 1e-14);
    CHECK(std::abs(out.amps[3] - Complex(0.0, std::sqrt(0.5))) < 1e-14);
}

TEST_CASE("circuit equals the dense layered product") {
    struct Case {
        const char *name;
        Ansatz ansatz;
        std::uint64_t seed;
    };
    AnsatzOptions first_order;
    first_order.trotter_order = 1;
    AnsatzOptions tied;
    tied.tie_angles = true;

    std::vector<Case> cases;
    cases.push_back({"critical bond chain", Ansatz(build_ising(3, 0.0, 1.0), 2), 1});
    cases.push_back({"tilted chain", Ansatz(build_ising(3, 0.3, 0.9), 1), 2});
    cases.push_back({"three-body split", Ansatz(build_tci(4, 1.0, 0.428), 2), 3});
    cases.push_back(
        {"three-body first order", Ansatz(build_tci(4, 1.0, 0.428), 1, first_order), 4});
    cases.push_back(
        {"hopping grouping", Ansatz(build_xxz(4, 0.5, XxzGrouping::U1), 1), 5});
    cases.push_back({"tied angles", Ansatz(build_ising(4, 0.0, 1.0), 2, tied), 6});

    for (const auto &c : cases) {
        CAPTURE(c.name);
        const int num_sites = c.ansatz.spec().num_sites;
        const Eigen::VectorXd theta =
            oracle::random_angles(c.ansatz.parameter_count(), 0.8, c.seed);
        const State psi0 = random_input(num_sites, c.seed + 100);

        const State got = apply_circuit(c.ansatz, theta, psi0);
        const Eigen::VectorXcd want = oracle::dense_circuit(c.ansatz, theta) * psi0.amps;
        CHECK((got.amps - want).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("declared charges survive every sublayer") {
    const Ansatz a(build_xxz(6, 0.5, XxzGrouping::U1), 3);
    const Eigen::VectorXd theta = oracle::random_angles(a.parameter_count(), 1.0, 9);
    EvolutionStats stats;
    const std::vector<int> flips = {1, 4};
    const State out = apply_circuit(a, theta, product_state(6, flips), &stats);
    CHECK(stats.max_norm_dev <= 1e-12);
    CHECK(stats.max_charge_dev <= 1e-10);
    CHECK(charge_expectation(out, SymmetryCharge::SumZ) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(charge_expectation(out, SymmetryCharge::ProductZ) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("trotter_sublayer sequences") {
    const HamiltonianSpec tci = build_tci(4, 1.0, 0.428);

    // Commuting groups apply terms ascending at full angles whatever the order.
    const TermGroup &xx = tci.groups[0];
    const std::vector<double> xx_angles = {0.1, 0.2, 0.3};
    for (int order : {1, 2}) {
        const auto seq = trotter_sublayer(xx, xx_angles, order);
        REQUIRE(seq.size() == 3);
        for (int t = 0; t < 3; ++t) {
            CHECK(seq[t].first == t);
            CHECK(seq[t].second == xx_angles[t]);
        }
    }

    // The non-commuting family splits symmetrically at order 2.
    const TermGroup &zxx = tci.groups[2];
    const std::vector<double> zxx_angles = {0.1, 0.2, 0.3, 0.4};
    const auto split = trotter_sublayer(zxx, zxx_angles, 2);
    REQUIRE(split.size() == 8);
    for (int t = 0; t < 4; ++t) {
        CHECK(split[t].first == t);
        CHECK(split[t].second == doctest::Approx(zxx_angles[t] / 2));
        CHECK(split[7 - t].first == t);
        CHECK(split[7 - t].second == doctest::Approx(zxx_angles[t] / 2));
    }

    const auto plain = trotter_sublayer(zxx, zxx_angles, 1);
    REQUIRE(plain.size() == 4);
    CHECK(plain[3].second == zxx_angles[3]);

    CHECK_THROWS_AS(trotter_sublayer(zxx, zxx_angles, 3), std::invalid_argument);
    const std::vector<double> short_angles = {0.1};
    CHECK_THROWS_AS(trotter_sublayer(zxx, short_angles, 2), std::invalid_argument);
}

TEST_CASE("symmetric split error shrinks cubically") {
    const HamiltonianSpec tci = build_tci(4, 1.0, 0.428);
    const TermGroup &zxx = tci.groups[2];
    const Eigen::MatrixXcd exact_gen = [&] {
        std::vector<PauliString> all;
        for (const auto &t : zxx.terms)
            all.insert(all.end(), t.strings.begin(), t.strings.end());
        return oracle::embed_sum(all, 4);
    }();
    const Eigen::VectorXcd psi = oracle::random_amplitudes(4, 17);

    auto split_error = [&](double theta) {
        const std::vector<double> angles(zxx.terms.size(), theta);
        Eigen::VectorXcd cur = psi;
        for (const auto &[t, angle] : trotter_sublayer(zxx, angles, 2))
            for (const auto &s : zxx.terms[t].strings)
                apply_exp_inplace(cur, PauliKernel::compile(s), angle);
        const Eigen::VectorXcd want = oracle::expm_i(exact_gen, theta) * psi;
        return (cur - want).norm();
    };

    const double e1 = split_error(0.04);
    const double e2 = split_error(0.02);
    CHECK(e1 > 0.0);
    // Third-order scaling: halving the angle divides the error by ~8.
    CHECK(e1 / e2 == doctest::Approx(8.0).epsilon(0.25));
}

TEST_CASE("forward cache holds the state before every gate") {
    const Ansatz a(build_tci(4, 1.0, 0.428), 2);
    const Eigen::VectorXd theta = oracle::random_angles(a.parameter_count(), 0.6, 23);
    const State psi0 = random_input(4, 24);

    const ForwardCache cache = forward_states(a, theta, psi0);
    REQUIRE(cache.before_gate.size() == a.gates().size());
    CHECK((cache.before_gate[0] - psi0.amps).cwiseAbs().maxCoeff() == 0.0);

    const State direct = apply_circuit(a, theta, psi0);
    CHECK((cache.final_state.amps - direct.amps).cwiseAbs().maxCoeff() == 0.0);

    // Perturbing one parameter cannot change states before its first gate.
    const int p = a.parameter_count() / 2;
    Eigen::VectorXd bumped = theta;
    bumped[p] += 0.37;
    const ForwardCache cache2 = forward_states(a, bumped, psi0);
    for (int k = 0; k <= a.first_gate(p); ++k)
        CHECK((cache2.before_gate[k] - cache.before_gate[k]).cwiseAbs().maxCoeff() ==
              0.0);
}

TEST_CASE("forward cache enforces its memory budget") {
    const Ansatz a(build_ising(6, 0.0, 1.0), 2);
    CHECK_THROWS_AS(forward_states(a, Eigen::VectorXd::Zero(a.parameter_count()),
                                   product_state(6), 1024),
                    ForwardCacheOverflow);
}

TEST_CASE("layer profile ends at the full-circuit observables") {
    const HamiltonianSpec spec = build_ising(4, 0.0, 1.0);
    const Ansatz a(spec, 3);
    const Eigen::VectorXd theta = oracle::random_angles(a.parameter_count(), 0.5, 31);
    const State psi0 = product_state(4);
    const State target = eigenstates(spec, 1, 1)[0].state;

    const auto rows = layer_profile(a, theta, psi0, target);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].layer == 1);
    CHECK(rows[2].layer == 3);

    const State full = apply_circuit(a, theta, psi0);
    CHECK(rows[2].fidelity ==
          doctest::Approx(std::abs(overlap(full, target))).epsilon(1e-12));
    CHECK(rows[2].energy == doctest::Approx(expectation(full, spec)).epsilon(1e-12));
    CHECK(rows[2].entropy == doctest::Approx(half_chain_entropy(full)).epsilon(1e-12));

    // Odd chains report no half-chain entropy.
    const HamiltonianSpec odd = build_ising(3, 0.0, 1.0);
    const Ansatz a3(odd, 1);
    const auto rows3 =
        layer_profile(a3, Eigen::VectorXd::Zero(a3.parameter_count()),
                      product_state(3), eigenstates(odd, 1, 1)[0].state);
    CHECK(std::isnan(rows3[0].entropy));
}

TEST_CASE("angles survive the file round trip bit-exactly") {
    const Ansatz a(build_tci(4, 1.0, 0.428), 2);
    Eigen::VectorXd theta = oracle::random_angles(a.parameter_count(), 0.9, 41);
    theta[0] = 0.1 + 0.2; // a value with a long binary tail

    const TempFile file("qprep_test_angles.json");
    save_angles(file.path, a, theta);
    const Eigen::VectorXd loaded = load_angles(file.path, a);
    REQUIRE(loaded.size() == theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i)
        CHECK(loaded[i] == theta[i]);

    // Layer indices are 1-based on disk.
    std::ifstream in(file.path);
    nlohmann::json doc;
    in >> doc;
    int min_layer = 99;
    for (const auto &entry : doc.at("entries"))
        min_layer = std::min(min_layer, entry.at("layer").get<int>());
    CHECK(min_layer == 1);

    // A different layout must refuse the file.
    const Ansatz other(build_tci(4, 1.0, 0.428), 3);
    CHECK_THROWS_AS(load_angles(file.path, other), std::runtime_error);
    CHECK_THROWS_AS(load_angles("/nonexistent/qprep_angles.json", a),
                    std::runtime_error);
}

TEST_CASE("tied angles reproduce the broadcast untied circuit") {
    const HamiltonianSpec spec = build_ising(4, 0.0, 1.0);
    AnsatzOptions opts;
    opts.tie_angles = true;
    const Ansatz tied(spec, 2, opts);
    const Ansatz untied(spec, 2);

    const Eigen::VectorXd shared = oracle::random_angles(tied.parameter_count(), 0.7, 51);
    Eigen::VectorXd broadcast(untied.parameter_count());
    for (int p = 0; p < untied.parameter_count(); ++p) {
        const ParameterKey key = untied.parameter_keys()[p];
        broadcast[p] =
            shared[tied.parameter_index(ParameterKey{key.layer, key.group, -1, -1})];
    }

    const State psi0 = random_input(4, 52);
    const State a = apply_circuit(tied, shared, psi0);
    const State b = apply_circuit(untied, broadcast, psi0);
    CHECK((a.amps - b.amps).cwiseAbs().maxCoeff() == 0.0);

    // Each tied parameter drives one gate per anchored term.
    const ParameterKey first_key{0, 0, -1, -1};
    CHECK(tied.gates_of(tied.parameter_index(first_key)).size() == 3);
}

TEST_CASE("argument validation on application entry points") {
    const Ansatz a(build_ising(3, 0.0, 1.0), 1);
    CHECK_THROWS_AS(apply_circuit(a, Eigen::VectorXd::Zero(2), product_state(3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        apply_circuit(a, Eigen::VectorXd::Zero(a.parameter_count()), product_state(4)),
        std::invalid_argument);
}
