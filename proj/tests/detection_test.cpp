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

#include "qiopa/detection.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qiopa/machines.hpp"

using namespace qiopa;

namespace {

constexpr double kPi = std::numbers::pi;

// Occupations in the layout k1H k1V k2H k2V aH aV bH bV.
const Occupation kHHV{0, 0, 0, 1, 1, 0, 1, 0};
const Occupation kHVH{0, 0, 1, 0, 1, 0, 0, 1};
const Occupation kVHH{0, 0, 1, 0, 0, 1, 1, 0};

FockState conditional_h(double g = 0.1) {
    return *threefold_pipeline(QubitSpec::horizontal(), Gain(g), EvolutionMethod::kFirstOrder).conditional;
}

// Three single-photon qubits (a, b, k2) as an 8-vector, index 4a + 2b + z
// with H = 0.
Eigen::VectorXcd as_qubits(const FockState& s) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
    for (const auto& [n, c] : s.terms()) v(4 * n[5] + 2 * n[7] + n[3]) += c;
    return v;
}

}  // namespace

TEST(Threefold, ConditionalAmplitudes) {
    const PostSelection post = threefold_pipeline(QubitSpec::horizontal(), Gain(0.1), EvolutionMethod::kFirstOrder);
    ASSERT_TRUE(post.conditional.has_value());
    const FockState& s = *post.conditional;
    EXPECT_EQ(s.terms().size(), 3u);
    const Complex phase = s.amplitude(kHHV) / std::abs(s.amplitude(kHHV));
    EXPECT_NEAR(std::abs(s.amplitude(kHHV) / phase - std::sqrt(2.0 / 3.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.amplitude(kHVH) / phase + 1.0 / std::sqrt(6.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.amplitude(kVHH) / phase + 1.0 / std::sqrt(6.0)), 0.0, 1e-12);
}

TEST(Threefold, ProbabilityClosedForm) {
    for (double g : {0.01, 0.1, 0.3, 0.45}) {
        const PostSelection post =
            threefold_pipeline(QubitSpec::horizontal(), Gain(g), EvolutionMethod::kFirstOrder);
        EXPECT_NEAR(post.probability, 1.5 * g * g / (1.0 + 3.0 * g * g), 1e-14) << "g=" << g;
    }
    const PostSelection none = threefold_pipeline(QubitSpec::horizontal(), Gain(0.0), EvolutionMethod::kFirstOrder);
    EXPECT_EQ(none.probability, 0.0);
    EXPECT_FALSE(none.conditional.has_value());
}

TEST(Threefold, PatternLabel) {
    const CoincidencePattern p = CoincidencePattern::threefold();
    EXPECT_EQ(p.constraints.size(), 3u);
    EXPECT_FALSE(p.label().empty());
}

TEST(Histogram, BinsAndErrors) {
    const XyzHistogram h = histogram_xyz(conditional_h());
    EXPECT_EQ(h.size(), 8u);
    EXPECT_NEAR(h.at("HHV"), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(h.at("HVH"), 1.0 / 6.0, 1e-12);
    EXPECT_NEAR(h.at("VHH"), 1.0 / 6.0, 1e-12);
    double rest = 0.0;
    for (const auto& [label, p] : h)
        if (label != "HHV" && label != "HVH" && label != "VHH") rest += p;
    EXPECT_EQ(rest, 0.0);

    const FockState output = amplifier_output(QubitSpec::horizontal(), Gain(0.1), EvolutionMethod::kFirstOrder);
    EXPECT_THROW(histogram_xyz(output), std::invalid_argument);
}

TEST(Histogram, MixtureKeepsPopulations) {
    const FockState s = conditional_h();
    for (double v : {0.0, 0.3, 1.0}) {
        const XyzHistogram h = histogram_xyz(dephase(s, v));
        EXPECT_NEAR(h.at("HHV"), 2.0 / 3.0, 1e-12);
        EXPECT_NEAR(h.at("VHH"), 1.0 / 6.0, 1e-12);
    }
    EXPECT_THROW(dephase(s, 1.5), std::invalid_argument);
}

TEST(Histogram, CsvLayout) {
    const std::string csv = histogram_csv(histogram_xyz(conditional_h()));
    EXPECT_EQ(csv.rfind("xyz,probability\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(Correlation, RotatedBasisPureAndMixed) {
    const FockState s = conditional_h();
    const Correlation pure = rotated_basis_correlation(s, kPi / 8);
    EXPECT_NEAR(pure.same, 1.0, 1e-12);
    EXPECT_NEAR(pure.different, 0.0, 1e-12);
    const Correlation mixed = rotated_basis_correlation(s, kPi / 8, 0.0);
    EXPECT_NEAR(mixed.same, 0.5, 1e-12);
    for (double v : {0.0, 0.25, 0.5, 0.68, 1.0}) {
        const Correlation c = rotated_basis_correlation(s, kPi / 8, v);
        EXPECT_NEAR(c.same, (1.0 + v) / 2.0, 1e-12) << "v=" << v;
        EXPECT_NEAR(c.same + c.different, 1.0, 1e-12);
    }
}

// Brute force on three qubits: HWP at 22.5 deg on a and b, then the k2 = H
// slice of the density matrix.
TEST(Correlation, MatchesQubitPicture) {
    const FockState s = conditional_h();
    const Eigen::VectorXcd psi = as_qubits(s);
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd hwp;
    hwp << r, r, r, -r;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            if ((i & 1) == (j & 1)) u(i, j) = hwp((i >> 2) & 1, (j >> 2) & 1) * hwp((i >> 1) & 1, (j >> 1) & 1);
    for (double v : {0.0, 0.5, 1.0}) {
        Eigen::MatrixXcd rho = psi * psi.adjoint();
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                if (i != j) rho(i, j) *= v;
        const Eigen::MatrixXcd out = u * rho * u.adjoint();
        const double hh = out(0, 0).real(), vv = out(6, 6).real();
        const double hv = out(2, 2).real(), vh = out(4, 4).real();
        const Correlation c = rotated_basis_correlation(s, kPi / 8, v);
        EXPECT_NEAR(c.same, (hh + vv) / (hh + vv + hv + vh), 1e-12);
    }
}

TEST(Correlation, ZeroZhBranch) {
    auto reg = make_opa_registry();
    const FockState only_v = FockState::basis(reg, kHHV);
    EXPECT_THROW(rotated_basis_correlation(only_v, kPi / 8), std::domain_error);
}

TEST(OverlapModel, Validation) {
    EXPECT_THROW(OverlapModel(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(OverlapModel(20.0, 1.2), std::invalid_argument);
    const OverlapModel m(20.0, 0.68);
    EXPECT_DOUBLE_EQ(m.visibility(0.0), 0.68);
    EXPECT_NEAR(m.visibility(20.0), 0.68 * std::exp(-0.5), 1e-15);
}

TEST(OverlapScan, PeakSymmetryAndTail) {
    const double sigma = 20.0;
    std::vector<double> z;
    for (int i = -40; i <= 40; ++i) z.push_back(i * 2.5);
    for (double v_max : {1.0, 0.68}) {
        const ScanResult scan = overlap_scan(OverlapModel(sigma, v_max), z);
        ASSERT_EQ(scan.rows.size(), z.size());
        const std::size_t mid = z.size() / 2;
        EXPECT_NEAR(scan.rows[mid].ratio, 1.0 + v_max, 1e-10);
        for (std::size_t i = 0; i < z.size(); ++i) {
            EXPECT_NEAR(scan.rows[i].ratio, scan.rows[z.size() - 1 - i].ratio, 1e-12);
            EXPECT_NEAR(scan.rows[i].ratio, 1.0 + v_max * std::exp(-z[i] * z[i] / (2 * sigma * sigma)), 1e-12);
        }
        for (std::size_t i = mid; i + 1 < z.size(); ++i) EXPECT_GE(scan.rows[i].ratio, scan.rows[i + 1].ratio);
    }
    // The Gaussian tail is inside 1e-6 of the baseline only past about 5.26 sigma.
    const double tail_z[] = {-5.3 * sigma, 5.3 * sigma, 6.0 * sigma};
    for (const auto& row : overlap_scan(OverlapModel(sigma, 1.0), tail_z).rows) EXPECT_LT(row.ratio - 1.0, 1e-6);
    const double edge[] = {5.0 * sigma};
    EXPECT_NEAR(overlap_scan(OverlapModel(sigma, 1.0), edge).rows[0].ratio - 1.0, std::exp(-12.5), 1e-15);
}

TEST(OverlapScan, DetectorEfficiency) {
    const PostSelection post = threefold_pipeline(QubitSpec::horizontal(), Gain(0.1), EvolutionMethod::kFirstOrder);
    const double z[] = {0.0, 30.0};
    const OverlapModel model(20.0, 0.68);
    const ScanResult ideal = overlap_scan(post, model, z, 1.0);
    const ScanResult lossy = overlap_scan(post, model, z, 0.55);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_DOUBLE_EQ(lossy.rows[i].ratio, ideal.rows[i].ratio);
        EXPECT_NEAR(lossy.rows[i].coincidence_probability / ideal.rows[i].coincidence_probability, 0.09150625,
                    1e-12);
    }
    EXPECT_THROW(overlap_scan(post, model, std::span<const double>{}, 1.0), std::invalid_argument);
    EXPECT_THROW(overlap_scan(PostSelection{}, model, z, 1.0), std::domain_error);

    const auto scaled = apply_detector_efficiency({{"x", 0.5}, {"y", 0.5}}, 0.5, 3);
    EXPECT_DOUBLE_EQ(scaled.at("x"), 0.0625);
}

TEST(MonteCarlo, DeterministicPerSeed) {
    const std::map<std::string, double> p{{"HHV", 2.0 / 3.0}, {"HVH", 1.0 / 6.0}, {"VHH", 1.0 / 6.0}};
    const auto a = monte_carlo_counts(p, 600, 42, 2400.0);
    const auto b = monte_carlo_counts(p, 600, 42, 2400.0);
    ASSERT_EQ(a.size(), 3u);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(to_json(a[i]), to_json(b[i]));
        total += a[i].simulated_counts;
    }
    EXPECT_EQ(total, 600);
    const auto c = monte_carlo_counts(p, 600, 43);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i].simulated_counts != c[i].simulated_counts;
    EXPECT_TRUE(differs);
}

TEST(MonteCarlo, CountsWithinFiveSigma) {
    std::map<std::string, double> p;
    for (const auto& [label, q] : histogram_xyz(conditional_h())) p[label] = q;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        for (const auto& r : monte_carlo_counts(p, 600, seed)) {
            const double mean = 600 * r.probability;
            const double sigma = std::sqrt(600 * r.probability * (1 - r.probability));
            EXPECT_LE(std::abs(r.simulated_counts - mean), 5 * sigma + 1e-9) << r.label << " seed " << seed;
            if (r.probability == 0.0) EXPECT_EQ(r.simulated_counts, 0);
        }
    }
}

TEST(MonteCarlo, InputValidation) {
    EXPECT_THROW(monte_carlo_counts({{"a", 0.5}, {"b", 0.4}}, 10, 1), std::invalid_argument);
    EXPECT_THROW(monte_carlo_counts({{"a", 1.0}}, -1, 1), std::invalid_argument);
    EXPECT_THROW(monte_carlo_counts({{"a", 1.5}, {"b", -0.5}}, 10, 1), std::invalid_argument);
    const auto zero = monte_carlo_counts({{"a", 0.25}, {"b", 0.75}}, 0, 1);
    EXPECT_EQ(zero[0].simulated_counts + zero[1].simulated_counts, 0);

    const double probs[] = {0.0, 1.0, 0.5};
    const auto counts = binomial_counts(probs, 100, 9);
    EXPECT_EQ(counts[0], 0);
    EXPECT_EQ(counts[1], 100);
    EXPECT_EQ(counts, binomial_counts(probs, 100, 9));
}
