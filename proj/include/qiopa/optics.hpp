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

#pragma once

#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qiopa/fock.hpp"

namespace qiopa {

/// Spatial and polarization labels of the amplifier layout.
namespace modes {
inline constexpr std::string_view kCloning = "k1";      // injection / cloning channel
inline constexpr std::string_view kAnticloning = "k2";  // anticloning channel
inline constexpr std::string_view kPortA = "a";         // beamsplitter outputs
inline constexpr std::string_view kPortB = "b";
inline constexpr std::string_view kH = "H";
inline constexpr std::string_view kV = "V";
}  // namespace modes

/// Registry with k1, k2, a, b, each carrying H and V.
RegistryPtr make_opa_registry(int photon_cap = kDefaultPhotonCap);

/// Polarization qubit alpha|H> + beta|V>.
class QubitSpec {
  public:
    /// Throws std::invalid_argument unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
    QubitSpec(Complex alpha, Complex beta);

    /// cos(theta/2)|H> + e^{i phi} sin(theta/2)|V>.
    static QubitSpec from_bloch(double theta, double phi);
    static QubitSpec horizontal() { return {1.0, 0.0}; }
    static QubitSpec vertical() { return {0.0, 1.0}; }
    static QubitSpec diagonal();      // +45 degrees
    static QubitSpec antidiagonal();  // -45 degrees

    Complex alpha() const { return alpha_; }
    Complex beta() const { return beta_; }
    /// Polar angle of the Bloch vector.
    double theta() const;
    /// Relative phase arg(beta) - arg(alpha); 0 when either amplitude vanishes.
    double phi() const;

    /// (-conj(beta), conj(alpha)); orthogonal to *this exactly.
    QubitSpec orthogonal() const { return {-std::conj(beta_), std::conj(alpha_)}; }
    QubitSpec with_global_phase(double phase) const;

  private:
    Complex alpha_;
    Complex beta_;
};

/// <lhs|rhs>.
Complex overlap(const QubitSpec& lhs, const QubitSpec& rhs);

/// Dimensionless amplifier gain g = chi * t.
class Gain {
  public:
    /// Throws std::invalid_argument for negative or non-finite values.
    explicit Gain(double value);
    double value() const { return value_; }

  private:
    double value_;
};

/// Gains at or above this are rejected by the first-order path.
inline constexpr double kFirstOrderGainLimit = 0.5;
/// Leakage past the photon cap above which the exact path flags truncation.
inline constexpr double kLeakageFlagThreshold = 1e-6;

/// alpha a_{spatial,H}^dagger + beta a_{spatial,V}^dagger.
std::vector<ModeTerm> polarized_creation(const ModeRegistry& registry, std::string_view spatial,
                                         const QubitSpec& polarization);

/// One photon in k1 with polarization psi, every other mode empty.
FockState prepare_injection(const QubitSpec& psi, RegistryPtr registry);

/// True when every term holds exactly one photon, in k1.
bool is_injection_form(const FockState& state);

struct Evolution {
    FockState state;
    bool truncated = false;
    /// Norm^2 that one more application of the generator pushes past the cap.
    double leakage = 0.0;
    /// False when the input was not a single injected photon on vacuum.
    bool injection_form = true;
};

/// |in> + g (a_psi^dag b_psiperp^dag - a_psiperp^dag b_psi^dag)|in>.
///
/// The photon-annihilating half of the interaction is omitted and the
/// result is not normalized; post-selection renormalizes downstream.
/// Throws std::out_of_range for g >= kFirstOrderGainLimit.
Evolution squeezer_evolve_first_order(const FockState& state, Gain gain, const QubitSpec& psi_basis);

/// exp(g K)|in> with K = P - P^dag and P = a_H^dag b_V^dag - a_V^dag b_H^dag,
/// i.e. exp(-i H t) for the polarization-invariant squeezing interaction
/// with hbar and chi folded into g.
///
/// The truncated generator is assembled on the smallest basis subset that
/// contains the input support and is closed under K, then exponentiated
/// densely by scaling and squaring.
Evolution squeezer_evolve_exact(const FockState& state, Gain gain);

/// exp(A) for a dense real matrix: Taylor series on A / 2^s with
/// ||A / 2^s||_1 < 0.5, summed until the next term is below 1e-12 in
/// 1-norm, then squared s times.
Eigen::MatrixXd expm_scaled_taylor(const Eigen::MatrixXd& generator);

/// Linear substitution of creation operators:
/// a_in^dagger -> sum_k c_k a_{out_k}^dagger for every listed input mode,
/// identity on every other mode.
struct ModeMap {
    struct Rule {
        std::size_t input;
        std::vector<ModeTerm> outputs;
    };
    std::vector<Rule> rules;

    /// Substitution by the conjugate-transposed mode matrix.
    ModeMap adjoint() const;
};

FockState apply_mode_map(const FockState& state, const ModeMap& map);

/// Balanced beamsplitter a_{in,p}^dag -> (a_{outA,p}^dag + a_{outB,p}^dag)/sqrt(2)
/// for p in {H, V}; no relative phase between the ports.
ModeMap beamsplitter_map(const ModeRegistry& registry, std::string_view input,
                         std::string_view output_a, std::string_view output_b);

/// Throws std::invalid_argument if either output port is already occupied.
FockState apply_beamsplitter(const FockState& state, std::string_view input = modes::kCloning,
                             std::string_view output_a = modes::kPortA,
                             std::string_view output_b = modes::kPortB);

enum class WaveplateKind { kHalf, kQuarter };

/// Jones matrix in the (H, V) basis. Half wave: [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
Eigen::Matrix2cd jones_matrix(WaveplateKind kind, double angle);

ModeMap waveplate_map(const ModeRegistry& registry, std::string_view spatial, double angle,
                      WaveplateKind kind);

FockState apply_waveplate(const FockState& state, std::string_view spatial, double angle,
                          WaveplateKind kind = WaveplateKind::kHalf);

enum class EvolutionMethod { kFirstOrder, kExact };

/// Optical elements of the amplifier bench.
namespace element {
struct Squeezer {
    Gain gain;
    EvolutionMethod method = EvolutionMethod::kExact;
    QubitSpec basis = QubitSpec::horizontal();
};
struct Beamsplitter {
    std::string input{modes::kCloning};
    std::string output_a{modes::kPortA};
    std::string output_b{modes::kPortB};
};
struct Waveplate {
    std::string spatial;
    double angle = 0.0;
    WaveplateKind kind = WaveplateKind::kHalf;
};
/// Routes H and V of a spatial mode to the two detectors of a pair. Modes
/// are already polarization-resolved, so the action is the identity.
struct PolarizationSort {
    std::string spatial;
};
}  // namespace element

using OpticalElement =
    std::variant<element::Squeezer, element::Beamsplitter, element::Waveplate, element::PolarizationSort>;

FockState apply_element(const OpticalElement& element, const FockState& state);

/// Matrix of an element on the listed basis columns, rows over the full
/// truncated basis of the registry.
Eigen::MatrixXcd element_matrix(const OpticalElement& element, const RegistryPtr& registry,
                                const std::vector<Occupation>& columns);

}  // namespace qiopa
