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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qiopa/fock.hpp"
#include "qiopa/optics.hpp"

namespace qiopa {

/// Required photon numbers per spatial mode for a coincidence event.
struct CoincidencePattern {
    std::vector<PhotonConstraint> constraints;

    /// One photon each in a, b and k2.
    static CoincidencePattern threefold();
    std::string label() const;
};

struct PostSelection {
    double probability = 0.0;
    /// Normalized conditional state; empty when the probability is zero.
    std::optional<FockState> conditional;
};

/// Probability relative to the input's own norm, so unnormalized inputs
/// are fine.
PostSelection postselect(const FockState& state, const CoincidencePattern& pattern);

/// Prepare H, amplify, split k1 on the beamsplitter and post-select the
/// threefold pattern.
PostSelection threefold_pipeline(const QubitSpec& psi, Gain gain, EvolutionMethod method,
                                 int photon_cap = kDefaultPhotonCap);

/// Component of a statistical mixture.
struct WeightedState {
    double weight;
    FockState state;
};
using Mixture = std::vector<WeightedState>;

/// v |psi><psi| + (1 - v) * sum_k |c_k|^2 |k><k|: every cross term between
/// distinct basis terms scaled by the overlap v in [0, 1].
Mixture dephase(const FockState& state, double overlap);

/// Bins "XYZ" with X, Y, Z in {H, V} for the polarizations found in a, b
/// and k2. All eight bins are always present.
using XyzHistogram = std::map<std::string, double>;

/// Throws std::invalid_argument unless every term has exactly one photon
/// in each of a, b, k2 and none elsewhere.
XyzHistogram histogram_xyz(const FockState& conditional);
XyzHistogram histogram_xyz(const Mixture& mixture);

struct Correlation {
    double same = 0.0;
    double different = 0.0;
};

/// Half-wave plates at `analyzer_angle` on a and b, then P(same) and
/// P(different) for the a/b polarizations given k2 = H.
/// Throws std::domain_error if k2 = H has zero probability.
Correlation rotated_basis_correlation(const Mixture& mixture, double analyzer_angle);
Correlation rotated_basis_correlation(const FockState& conditional, double analyzer_angle, double overlap = 1.0);

/// Gaussian mode overlap versus mirror position, v(z) = v_max exp(-z^2 / 2 sigma_z^2).
class OverlapModel {
  public:
    /// Throws std::invalid_argument unless sigma_z > 0 and v_max in [0, 1].
    OverlapModel(double sigma_z, double v_max);

    double sigma_z() const { return sigma_z_; }
    double v_max() const { return v_max_; }
    double visibility(double z) const;

  private:
    double sigma_z_;
    double v_max_;
};

struct ScanRow {
    double z;
    double visibility;
    /// Fourfold rate relative to the fully distinguishable rate.
    double ratio;
    /// Absolute fourfold probability per injected photon.
    double coincidence_probability;
};

struct ScanResult {
    std::vector<ScanRow> rows;
};

/// Fourfold coincidences with both analyzers at 22.5 degrees (a and b at
/// +45) and k2 = H, for each z, with the conditional's cross terms scaled
/// by v(z).
ScanResult overlap_scan(const PostSelection& threefold, const OverlapModel& model,
                        std::span<const double> z_values, double detector_eta = 1.0);

/// Scan on the first-order H-injection pipeline at the given gain.
ScanResult overlap_scan(const OverlapModel& model, std::span<const double> z_values, Gain gain = Gain(0.1));

struct CountRecord {
    std::string label;
    double probability = 0.0;
    std::int64_t simulated_counts = 0;
    double duration_s = 0.0;
    std::uint64_t seed = 0;
};

/// Multinomial draw of `total_events` over the labels (in label order) with
/// a generator seeded by `seed`. Throws for negative totals or
/// probabilities not summing to 1 within 1e-9.
std::vector<CountRecord> monte_carlo_counts(const std::map<std::string, double>& probabilities,
                                            std::int64_t total_events, std::uint64_t seed,
                                            double duration_s = 0.0);

/// Independent binomial draws, one per probability, each over `trials`.
std::vector<std::int64_t> binomial_counts(std::span<const double> probabilities, std::int64_t trials,
                                          std::uint64_t seed);

/// Scales every entry by eta^n_detectors; no renormalization.
std::map<std::string, double> apply_detector_efficiency(const std::map<std::string, double>& probabilities,
                                                        double eta, int n_detectors);

std::string to_json(const CountRecord& record);
std::string histogram_csv(const XyzHistogram& histogram);

}  // namespace qiopa
