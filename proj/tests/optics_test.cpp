// Copyright 2026 The qiopa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qiopa/optics.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qiopa/machines.hpp"

using namespace qiopa;

namespace {

constexpr double kPi = std::numbers::pi;

// Layout indices of make_opa_registry.
constexpr int k1H = 0, k1V = 1, k2H = 2, k2V = 3, aH = 4, aV = 5, bH = 6, bV = 7;

struct DenseOpa {
    oracle::DenseSpace space;
    std::vector<Eigen::MatrixXcd> up;  // creation matrix per mode

    explicit DenseOpa(int cap) : space(oracle::make_space(8, cap)) {
        for (int m = 0; m < 8; ++m) up.push_back(oracle::creation(space, m));
    }

    // P = a_H^dag b_V^dag - a_V^dag b_H^dag on (k1, k2).
    Eigen::MatrixXcd pair() const { return up[k1H] * up[k2V] - up[k1V] * up[k2H]; }
};

const DenseOpa& dense4() {
    static const DenseOpa opa(4);
    return opa;
}

Occupation occ(std::initializer_list<int> values) { return Occupation(values); }

}  // namespace

TEST(QubitSpec, ValidationAndBlochAngles) {
    EXPECT_THROW(QubitSpec(1.0, 0.1), std::invalid_argument);
    const QubitSpec q = QubitSpec::from_bloch(0.7, 1.3);
    EXPECT_NEAR(q.theta(), 0.7, 1e-12);
    EXPECT_NEAR(q.phi(), 1.3, 1e-12);
    EXPECT_NEAR(std::abs(overlap(q, q.orthogonal())), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(overlap(QubitSpec::diagonal(), QubitSpec::antidiagonal())), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(QubitSpec::vertical().phi(), 0.0);
    EXPECT_THROW(Gain(-0.1), std::invalid_argument);
    EXPECT_THROW(Gain(std::nan("")), std::invalid_argument);
}

TEST(Injection, SinglePhotonInCloningMode) {
    auto reg = make_opa_registry();
    const FockState s = prepare_injection(QubitSpec::from_bloch(kPi / 3, 0.2), reg);
    EXPECT_TRUE(is_injection_form(s));
    EXPECT_NEAR(s.norm2(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(s.amplitude(occ({1, 0, 0, 0, 0, 0, 0, 0}))), std::cos(kPi / 6), 1e-12);

    auto bare = make_registry({{"a", "H"}, {"a", "V"}});
    EXPECT_THROW(prepare_injection(QubitSpec::horizontal(), bare), std::invalid_argument);
}

TEST(FirstOrder, HorizontalInjectionAmplitudes) {
    const auto out = squeezer_evolve_first_order(prepare_injection(QubitSpec::horizontal(), make_opa_registry()),
                                                 Gain(0.1), QubitSpec::horizontal());
    const FockState& s = out.state;
    EXPECT_EQ(s.terms().size(), 3u);
    EXPECT_NEAR(std::abs(s.amplitude(occ({1, 0, 0, 0, 0, 0, 0, 0})) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.amplitude(occ({2, 0, 0, 1, 0, 0, 0, 0})) - 0.1 * std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.amplitude(occ({1, 1, 1, 0, 0, 0, 0, 0})) + 0.1), 0.0, 1e-15);
    EXPECT_FALSE(out.truncated);
}

TEST(FirstOrder, MatchesDenseOperatorForAnyInjection) {
    const auto& opa = dense4();
    const Eigen::MatrixXcd pair = opa.pair();
    auto reg = make_opa_registry();
    for (const QubitSpec& psi : fibonacci_bloch_points(20, 0.3)) {
        const FockState in = prepare_injection(psi, reg);
        for (double g : {0.0, 0.05, 0.1, 0.3}) {
            const Eigen::VectorXcd v = oracle::to_dense(in, opa.space);
            const Eigen::VectorXcd expected = v + g * pair * v;
            const FockState got = squeezer_evolve_first_order(in, Gain(g), psi).state;
            EXPECT_LT((oracle::to_dense(got, opa.space) - expected).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(FirstOrder, PsiAdaptedRatioIsMinusSqrtTwo) {
    // Written in the psi / psi_perp basis the emission branch is
    // sqrt2 |2 psi>|psi_perp> - |psi, psi_perp>|psi>.
    auto reg = make_opa_registry();
    for (const QubitSpec& psi : fibonacci_bloch_points(20)) {
        const FockState out =
            squeezer_evolve_first_order(prepare_injection(psi, reg), Gain(0.1), psi).state;
        const QubitSpec perp = psi.orthogonal();
        const auto a_psi = polarized_creation(*reg, modes::kCloning, psi);
        const auto a_perp = polarized_creation(*reg, modes::kCloning, perp);
        const auto b_psi = polarized_creation(*reg, modes::kAnticloning, psi);
        const auto b_perp = polarized_creation(*reg, modes::kAnticloning, perp);
        const FockState vac = FockState::vacuum(reg);
        const FockState twin = apply_creation(apply_creation(apply_creation(vac, a_psi), a_psi), b_perp).scaled(
            1.0 / std::sqrt(2.0));
        const FockState mixed = apply_creation(apply_creation(apply_creation(vac, a_psi), a_perp), b_psi);
        const Complex c_twin = inner_product(twin, out);
        const Complex c_mixed = inner_product(mixed, out);
        EXPECT_NEAR(std::abs(c_twin / c_mixed + std::sqrt(2.0)), 0.0, 1e-12);
    }
}

TEST(FirstOrder, RejectsLargeGain) {
    const auto in = prepare_injection(QubitSpec::horizontal(), make_opa_registry());
    EXPECT_THROW(squeezer_evolve_first_order(in, Gain(0.5), QubitSpec::horizontal()), std::out_of_range);
    EXPECT_NO_THROW(squeezer_evolve_first_order(in, Gain(0.49), QubitSpec::horizontal()));
}

TEST(ExpmScaledTaylor, MatchesEigendecomposition) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    for (int n : {1, 3, 8}) {
        for (double scale : {0.01, 1.0, 6.0}) {
            Eigen::MatrixXd a(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
            const Eigen::MatrixXd k = scale * (a - a.transpose());
            // exp(K) = exp(-i H) with H = i K Hermitian.
            const Eigen::MatrixXcd expected =
                oracle::evolve_hermitian(Complex(0, 1) * k.cast<Complex>(), 1.0);
            const Eigen::MatrixXd got = expm_scaled_taylor(k);
            EXPECT_LT((got.cast<Complex>() - expected).cwiseAbs().maxCoeff(), 1e-11) << n << " " << scale;
        }
    }
    EXPECT_EQ(expm_scaled_taylor(Eigen::MatrixXd::Zero(2, 2)), Eigen::MatrixXd::Identity(2, 2));
}

TEST(Exact, MatchesDenseExponential) {
    const auto& opa = dense4();
    const Eigen::MatrixXcd pair = opa.pair();
    const Eigen::MatrixXcd hamiltonian = Complex(0, 1) * (pair - pair.adjoint());
    auto reg = make_opa_registry();
    std::mt19937_64 rng(21);
    std::vector<FockState> inputs{prepare_injection(QubitSpec::horizontal(), reg),
                                  prepare_injection(QubitSpec::from_bloch(2.0, -1.0), reg),
                                  FockState::vacuum(reg)};
    for (int i = 0; i < 4; ++i) inputs.push_back(oracle::random_state(rng, opa.space, reg, 6, 2));
    for (double g : {0.05, 0.1, 0.15, 0.4}) {
        const Eigen::MatrixXcd u = oracle::evolve_hermitian(hamiltonian, g);
        for (const auto& in : inputs) {
            const Evolution out = squeezer_evolve_exact(in, Gain(g));
            const Eigen::VectorXcd expected = u * oracle::to_dense(in, opa.space);
            EXPECT_LT((oracle::to_dense(out.state, opa.space) - expected).cwiseAbs().maxCoeff(), 1e-11)
                << "g=" << g;
            EXPECT_NEAR(out.state.norm2(), 1.0, 1e-11);
        }
    }
}

TEST(Exact, ZeroGainIsIdentity) {
    const auto in = prepare_injection(QubitSpec::diagonal(), make_opa_registry());
    const Evolution out = squeezer_evolve_exact(in, Gain(0.0));
    EXPECT_LT(oracle::max_difference(out.state, in), 1e-15);
    EXPECT_EQ(out.leakage, 0.0);
    EXPECT_FALSE(out.truncated);
}

TEST(Exact, CovariantUnderJointPolarizationRotation) {
    auto reg = make_opa_registry();
    const QubitSpec u = QubitSpec::from_bloch(1.2, 0.8);
    const Complex a = u.alpha(), b = u.beta();
    ModeMap rotate;
    for (std::string_view spatial : {modes::kCloning, modes::kAnticloning}) {
        const std::size_t h = reg->index_of(spatial, modes::kH);
        const std::size_t v = reg->index_of(spatial, modes::kV);
        rotate.rules.push_back({h, {{h, a}, {v, b}}});
        rotate.rules.push_back({v, {{h, -std::conj(b)}, {v, std::conj(a)}}});
    }
    std::mt19937_64 rng(8);
    const auto& opa = dense4();
    for (int trial = 0; trial < 5; ++trial) {
        FockState in = oracle::random_state(rng, opa.space, reg, 5, 2);
        in = project(in, std::vector<PhotonConstraint>{{"a", 0}, {"b", 0}});
        if (in.is_zero()) continue;
        in = in.normalized();
        const FockState lhs = squeezer_evolve_exact(apply_mode_map(in, rotate), Gain(0.2)).state;
        const FockState rhs = apply_mode_map(squeezer_evolve_exact(in, Gain(0.2)).state, rotate);
        EXPECT_LT(oracle::max_difference(lhs, rhs), 1e-11);
    }
}

TEST(Exact, LeakageScalingAndFlag) {
    auto reg = make_opa_registry();
    const auto in = prepare_injection(QubitSpec::horizontal(), reg);
    const Evolution low = squeezer_evolve_exact(in, Gain(0.01));
    const Evolution mid = squeezer_evolve_exact(in, Gain(0.05));
    const Evolution nominal = squeezer_evolve_exact(in, Gain(0.1));
    EXPECT_FALSE(low.truncated);
    EXPECT_LT(low.leakage, kLeakageFlagThreshold);
    EXPECT_TRUE(nominal.truncated);
    EXPECT_GT(nominal.leakage, kLeakageFlagThreshold);
    // Leading order g^4: the 3-photon branch carries weight ~g^2 and one
    // more pair costs another g^2.
    EXPECT_NEAR(nominal.leakage / mid.leakage, 16.0, 1.5);

    const Evolution roomy = squeezer_evolve_exact(rehome(in, make_opa_registry(8)), Gain(0.1));
    EXPECT_LT(roomy.leakage, nominal.leakage * 1e-2);
}

TEST(Exact, FirstOrderAgreesAtSmallGain) {
    auto reg = make_opa_registry();
    for (const QubitSpec& psi : fibonacci_bloch_points(6)) {
        const auto in = prepare_injection(psi, reg);
        const FockState exact = squeezer_evolve_exact(in, Gain(0.1)).state;
        const FockState linear = squeezer_evolve_first_order(in, Gain(0.1), psi).state.normalized();
        EXPECT_LT(oracle::max_difference(exact, linear), 0.01);
    }
}

// Beamsplitter oracle: move k1 into the empty port a, then run the
// a/b mixing unitary exp(theta (b^dag a - a^dag b)) with theta = pi/4.
TEST(Beamsplitter, MatchesSwapAndMixingUnitary) {
    const auto& opa = dense4();
    Eigen::MatrixXcd generator = Eigen::MatrixXcd::Zero(opa.space.dim(), opa.space.dim());
    for (auto [a, b] : {std::pair{aH, bH}, std::pair{aV, bV}}) {
        generator += opa.up[b] * opa.up[a].adjoint() - opa.up[a] * opa.up[b].adjoint();
    }
    const Eigen::MatrixXcd mix = oracle::evolve_hermitian(Complex(0, 1) * generator, kPi / 4);

    auto reg = make_opa_registry();
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        FockState in = project(oracle::random_state(rng, opa.space, reg, 8),
                               std::vector<PhotonConstraint>{{"a", 0}, {"b", 0}});
        if (in.is_zero()) continue;
        in = in.normalized();
        Eigen::VectorXcd moved = Eigen::VectorXcd::Zero(opa.space.dim());
        for (const auto& [n, c] : in.terms()) {
            Occupation m = n;
            std::swap(m[k1H], m[aH]);
            std::swap(m[k1V], m[aV]);
            moved(opa.space.index.at(m)) = c;
        }
        const Eigen::VectorXcd expected = mix * moved;
        const FockState got = apply_beamsplitter(in);
        EXPECT_LT((oracle::to_dense(got, opa.space) - expected).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(got.norm2(), 1.0, 1e-12);
    }
}

TEST(Beamsplitter, AdjointUndoesIt) {
    auto reg = make_opa_registry();
    const auto map = beamsplitter_map(*reg, modes::kCloning, modes::kPortA, modes::kPortB);
    const FockState in = squeezer_evolve_first_order(prepare_injection(QubitSpec::from_bloch(0.4, 2.2), reg),
                                                     Gain(0.1), QubitSpec::from_bloch(0.4, 2.2))
                             .state;
    const FockState back = apply_mode_map(apply_beamsplitter(in), map.adjoint());
    EXPECT_LT(oracle::max_difference(back.pruned(1e-15), in), 1e-12);
}

TEST(Beamsplitter, OccupiedOutputRejected) {
    auto reg = make_opa_registry();
    const FockState in = FockState::basis(reg, occ({1, 0, 0, 0, 1, 0, 0, 0}));
    EXPECT_THROW(apply_beamsplitter(in), std::invalid_argument);
}

TEST(Waveplate, HalfWaveExamples) {
    auto reg = make_registry({{"a", "H"}, {"a", "V"}});
    const FockState h = FockState::basis(reg, {1, 0});
    const FockState v = FockState::basis(reg, {0, 1});
    const double r = 1.0 / std::sqrt(2.0);

    const FockState h45 = apply_waveplate(h, "a", kPi / 8);
    EXPECT_NEAR(std::abs(h45.amplitude({1, 0}) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(h45.amplitude({0, 1}) - r), 0.0, 1e-15);
    const FockState v45 = apply_waveplate(v, "a", kPi / 8);
    EXPECT_NEAR(std::abs(v45.amplitude({1, 0}) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v45.amplitude({0, 1}) + r), 0.0, 1e-15);

    EXPECT_NEAR(std::abs(apply_waveplate(v, "a", 0.0).amplitude({0, 1}) + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(apply_waveplate(h, "a", kPi / 4).amplitude({0, 1}) - 1.0), 0.0, 1e-15);
}

TEST(Waveplate, JonesMatricesAreUnitaryAndQuarterSquaresToHalf) {
    for (double angle : {0.0, 0.3, kPi / 8, kPi / 4, 1.7}) {
        const Eigen::Matrix2cd half = jones_matrix(WaveplateKind::kHalf, angle);
        const Eigen::Matrix2cd quarter = jones_matrix(WaveplateKind::kQuarter, angle);
        EXPECT_LT((half * half.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LT((quarter * quarter.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LT((quarter * quarter - half).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(Waveplate, TwoPhotonBunchingTerm) {
    // HWP at pi/8 on |HV>: (a_H^dag + a_V^dag)(a_H^dag - a_V^dag)/2 = (|2,0> - |0,2>)/sqrt2.
    auto reg = make_registry({{"a", "H"}, {"a", "V"}}, 2);
    const FockState out = apply_waveplate(FockState::basis(reg, {1, 1}), "a", kPi / 8);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(out.amplitude({2, 0}) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude({0, 2}) + r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude({1, 1})), 0.0, 1e-15);
}

TEST(Elements, MatricesAreUnitaryOnTheirDomain) {
    auto reg = make_opa_registry(3);
    const auto basis = enumerate_basis(*reg);

    auto check_isometry = [](const Eigen::MatrixXcd& m, double tol) {
        const Eigen::MatrixXcd gram = m.adjoint() * m;
        EXPECT_LT((gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), tol);
    };

    check_isometry(element_matrix(element::Waveplate{"a", 0.37, WaveplateKind::kHalf}, reg, basis), 1e-12);
    check_isometry(element_matrix(element::Waveplate{"k2", 1.1, WaveplateKind::kQuarter}, reg, basis), 1e-12);
    const auto sort = element_matrix(element::PolarizationSort{"b"}, reg, basis);
    EXPECT_EQ((sort - Eigen::MatrixXcd::Identity(sort.rows(), sort.cols())).cwiseAbs().maxCoeff(), 0.0);

    std::vector<Occupation> empty_ports;
    for (const auto& n : basis)
        if (n[aH] + n[aV] + n[bH] + n[bV] == 0) empty_ports.push_back(n);
    check_isometry(element_matrix(element::Beamsplitter{}, reg, empty_ports), 1e-12);

    // The squeezer stays within the cap only from the low-photon sector.
    std::vector<Occupation> low;
    for (const auto& n : basis)
        if (total_photons(n) <= 1 && n[aH] + n[aV] + n[bH] + n[bV] == 0) low.push_back(n);
    check_isometry(element_matrix(element::Squeezer{Gain(0.1)}, make_opa_registry(4), low), 1e-11);
}

TEST(Elements, ApplyDispatches) {
    auto reg = make_opa_registry();
    const auto in = prepare_injection(QubitSpec::horizontal(), reg);
    const FockState squeezed =
        apply_element(element::Squeezer{Gain(0.1), EvolutionMethod::kFirstOrder, QubitSpec::horizontal()}, in);
    EXPECT_EQ(squeezed.terms().size(), 3u);
    EXPECT_EQ(oracle::max_difference(apply_element(element::PolarizationSort{"k1"}, in), in), 0.0);
}
