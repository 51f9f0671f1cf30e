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

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qiopa {

using Complex = std::complex<double>;

/// Photon numbers, one entry per registered mode.
using Occupation = std::vector<int>;

/// Amplitudes with magnitude below this may be dropped from a state.
inline constexpr double kPruneTolerance = 1e-14;

/// Default truncation of the total photon number.
inline constexpr int kDefaultPhotonCap = 4;

/// An optical mode: a spatial mode carrying one polarization.
struct Mode {
    std::string spatial;
    std::string polarization;

    std::string label() const { return spatial + polarization; }
    bool operator==(const Mode&) const = default;
};

/// Ordered set of modes plus a cap on the total photon number.
///
/// The registry fixes the meaning of every Occupation index. States that
/// share a registry can be added and compared; states on different
/// registries cannot.
class ModeRegistry {
  public:
    ModeRegistry(std::vector<Mode> modes, int photon_cap);

    std::size_t size() const { return modes_.size(); }
    int photon_cap() const { return photon_cap_; }
    const std::vector<Mode>& modes() const { return modes_; }
    const Mode& mode(std::size_t index) const { return modes_.at(index); }

    std::optional<std::size_t> find(std::string_view spatial, std::string_view polarization) const;
    /// Throws std::invalid_argument for an unknown mode.
    std::size_t index_of(std::string_view spatial, std::string_view polarization) const;
    /// Looks up a mode by its concatenated label, e.g. "k1H".
    std::size_t index_of(std::string_view label) const;
    /// All modes sharing a spatial label, in registry order. Throws if none.
    std::vector<std::size_t> spatial_modes(std::string_view spatial) const;

    bool is_valid(const Occupation& occupation) const;

    bool operator==(const ModeRegistry& other) const {
        return photon_cap_ == other.photon_cap_ && modes_ == other.modes_;
    }

  private:
    std::vector<Mode> modes_;
    int photon_cap_;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

RegistryPtr make_registry(std::vector<Mode> modes, int photon_cap = kDefaultPhotonCap);

int total_photons(const Occupation& occupation);

/// Every occupation vector with total photon number <= cap, in
/// lexicographic order.
std::vector<Occupation> enumerate_basis(const ModeRegistry& registry);

/// Sparse state vector over the truncated Fock basis of a registry.
///
/// Immutable: every operation returns a new state. The truncation flag is
/// sticky and records that some operation in the state's history dropped
/// amplitude at the photon cap.
class FockState {
  public:
    using Terms = std::map<Occupation, Complex>;

    /// The zero vector.
    explicit FockState(RegistryPtr registry);
    FockState(RegistryPtr registry, Terms terms, bool truncated = false);

    static FockState vacuum(RegistryPtr registry);
    static FockState basis(RegistryPtr registry, Occupation occupation, Complex amplitude = 1.0);

    const ModeRegistry& registry() const { return *registry_; }
    const RegistryPtr& registry_ptr() const { return registry_; }
    const Terms& terms() const { return terms_; }
    bool truncated() const { return truncated_; }
    bool is_zero() const { return terms_.empty(); }

    Complex amplitude(const Occupation& occupation) const;
    double norm2() const;

    /// Throws std::domain_error on the zero vector.
    FockState normalized() const;
    FockState pruned(double tolerance = kPruneTolerance) const;
    FockState scaled(Complex factor) const;
    FockState with_truncated(bool truncated) const;

    friend FockState operator+(const FockState& lhs, const FockState& rhs);
    friend FockState operator-(const FockState& lhs, const FockState& rhs);
    friend FockState operator*(Complex factor, const FockState& state) { return state.scaled(factor); }

  private:
    RegistryPtr registry_;
    Terms terms_;
    bool truncated_ = false;
};

/// One term of a linear combination of single-mode operators.
struct ModeTerm {
    std::size_t mode;
    Complex coefficient;
};

/// a_mode^dagger |state>; terms pushed past the photon cap are dropped and
/// the result is flagged as truncated.
FockState apply_creation(const FockState& state, std::size_t mode);
/// sum_k c_k a_{m_k}^dagger |state>.
FockState apply_creation(const FockState& state, std::span<const ModeTerm> combination);
FockState apply_annihilation(const FockState& state, std::size_t mode);

/// <lhs|rhs>, conjugate-linear in lhs. Throws on registry mismatch.
Complex inner_product(const FockState& lhs, const FockState& rhs);

/// Required photon number summed over every mode of one spatial label.
struct PhotonConstraint {
    std::string spatial;
    int photons;
};

/// Unnormalized projection onto the terms that satisfy every constraint.
FockState project(const FockState& state, std::span<const PhotonConstraint> constraints);

/// Copies a state onto another registry with identical modes. Terms above
/// the target cap are dropped and flag the result.
FockState rehome(const FockState& state, RegistryPtr target);

/// Weight of the terms whose total photon number exceeds `photons`.
double weight_above(const FockState& state, int photons);

std::string format_occupation(const Occupation& occupation);
Occupation parse_occupation(std::string_view text);

/// Canonical text form: one `occupation TAB re TAB im` line per term.
std::string to_text(const FockState& state);
FockState from_text(std::string_view text, RegistryPtr registry);

}  // namespace qiopa
