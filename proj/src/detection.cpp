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

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qiopa/text_io.hpp"

namespace qiopa {

CoincidencePattern CoincidencePattern::threefold() {
    return {{{std::string(modes::kPortA), 1}, {std::string(modes::kPortB), 1}, {std::string(modes::kAnticloning), 1}}};
}

std::string CoincidencePattern::label() const {
    std::string out;
    for (const auto& c : constraints) {
        if (!out.empty()) out += '+';
        out += std::to_string(c.photons) + c.spatial;
    }
    return out;
}

PostSelection postselect(const FockState& state, const CoincidencePattern& pattern) {
    const double total = state.norm2();
    if (total == 0.0) return {};
    const FockState projected = project(state, pattern.constraints);
    const double kept = projected.norm2();
    if (kept == 0.0) return {};
    return {kept / total, projected.normalized()};
}

PostSelection threefold_pipeline(const QubitSpec& psi, Gain gain, EvolutionMethod method, int photon_cap) {
    const FockState injected = prepare_injection(psi, make_opa_registry(photon_cap));
    const FockState amplified = method == EvolutionMethod::kExact
                                    ? squeezer_evolve_exact(injected, gain).state
                                    : squeezer_evolve_first_order(injected, gain, psi).state;
    return postselect(apply_beamsplitter(amplified), CoincidencePattern::threefold());
}

Mixture dephase(const FockState& state, double overlap) {
    if (!(overlap >= 0.0 && overlap <= 1.0)) throw std::invalid_argument("overlap must lie in [0, 1]");
    const double norm2 = state.norm2();
    if (norm2 == 0.0) throw std::domain_error("cannot dephase the zero state");
    Mixture out;
    if (overlap > 0.0) out.push_back({overlap, state.normalized()});
    if (overlap < 1.0) {
        for (const auto& [occupation, amplitude] : state.terms()) {
            const double p = std::norm(amplitude) / norm2;
            if (p == 0.0) continue;
            out.push_back({(1.0 - overlap) * p,
                           FockState::basis(state.registry_ptr(), occupation, amplitude / std::abs(amplitude))});
        }
    }
    return out;
}

namespace {

struct XyzModes {
    std::size_t a[2];
    std::size_t b[2];
    std::size_t k2[2];
};

XyzModes xyz_modes(const ModeRegistry& registry) {
    auto pair = [&](std::string_view spatial) {
        return std::array<std::size_t, 2>{registry.index_of(spatial, modes::kH), registry.index_of(spatial, modes::kV)};
    };
    const auto a = pair(modes::kPortA);
    const auto b = pair(modes::kPortB);
    const auto k2 = pair(modes::kAnticloning);
    return {{a[0], a[1]}, {b[0], b[1]}, {k2[0], k2[1]}};
}

/// "H" or "V" for the single photon held by a mode pair; throws otherwise.
char single_photon_polarization(const Occupation& occupation, const std::size_t (&pair)[2]) {
    const int h = occupation[pair[0]];
    const int v = occupation[pair[1]];
    if (h + v != 1) throw std::invalid_argument("XYZ histogram needs exactly one photon per detector pair");
    return h == 1 ? 'H' : 'V';
}

XyzHistogram empty_histogram() {
    XyzHistogram h;
    for (char x : {'H', 'V'})
        for (char y : {'H', 'V'})
            for (char z : {'H', 'V'}) h[std::string{x, y, z}] = 0.0;
    return h;
}

void accumulate(XyzHistogram& histogram, const FockState& state, double weight) {
    const XyzModes m = xyz_modes(state.registry());
    const double norm2 = state.norm2();
    if (norm2 == 0.0) throw std::invalid_argument("XYZ histogram of the zero state");
    for (const auto& [occupation, amplitude] : state.terms()) {
        if (total_photons(occupation) != 3) {
            throw std::invalid_argument("XYZ histogram needs exactly three photons in a, b and k2");
        }
        const std::string key{single_photon_polarization(occupation, m.a),
                              single_photon_polarization(occupation, m.b),
                              single_photon_polarization(occupation, m.k2)};
        histogram[key] += weight * std::norm(amplitude) / norm2;
    }
}

Mixture rotate_analyzers(const Mixture& mixture, double angle) {
    Mixture out;
    out.reserve(mixture.size());
    for (const auto& [weight, state] : mixture) {
        FockState rotated = apply_waveplate(state, modes::kPortA, angle, WaveplateKind::kHalf);
        rotated = apply_waveplate(rotated, modes::kPortB, angle, WaveplateKind::kHalf);
        out.push_back({weight, std::move(rotated)});
    }
    return out;
}

double fourfold_plus_plus_h(const PostSelection& threefold, double overlap) {
    const XyzHistogram h = histogram_xyz(rotate_analyzers(dephase(*threefold.conditional, overlap),
                                                          std::numbers::pi / 8.0));
    return h.at("HHH");
}

}  // namespace

XyzHistogram histogram_xyz(const FockState& conditional) {
    XyzHistogram h = empty_histogram();
    accumulate(h, conditional, 1.0);
    return h;
}

XyzHistogram histogram_xyz(const Mixture& mixture) {
    XyzHistogram h = empty_histogram();
    for (const auto& [weight, state] : mixture) accumulate(h, state, weight);
    return h;
}

Correlation rotated_basis_correlation(const Mixture& mixture, double analyzer_angle) {
    const XyzHistogram h = histogram_xyz(rotate_analyzers(mixture, analyzer_angle));
    const double same = h.at("HHH") + h.at("VVH");
    const double different = h.at("HVH") + h.at("VHH");
    const double z_is_h = same + different;
    if (z_is_h <= 0.0) throw std::domain_error("k2 = H has zero probability");
    return {same / z_is_h, different / z_is_h};
}

Correlation rotated_basis_correlation(const FockState& conditional, double analyzer_angle, double overlap) {
    return rotated_basis_correlation(dephase(conditional, overlap), analyzer_angle);
}

OverlapModel::OverlapModel(double sigma_z, double v_max) : sigma_z_(sigma_z), v_max_(v_max) {
    if (!(sigma_z_ > 0.0) || !std::isfinite(sigma_z_)) throw std::invalid_argument("sigma_z must be > 0");
    if (!(v_max_ >= 0.0 && v_max_ <= 1.0)) throw std::invalid_argument("v_max must lie in [0, 1]");
}

double OverlapModel::visibility(double z) const {
    return v_max_ * std::exp(-z * z / (2.0 * sigma_z_ * sigma_z_));
}

ScanResult overlap_scan(const PostSelection& threefold, const OverlapModel& model,
                        std::span<const double> z_values, double detector_eta) {
    if (z_values.empty()) throw std::invalid_argument("overlap scan needs at least one z value");
    if (!threefold.conditional) throw std::domain_error("overlap scan needs a non-empty post-selection");
    if (!(detector_eta >= 0.0 && detector_eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
    const double baseline = fourfold_plus_plus_h(threefold, 0.0);
    if (baseline <= 0.0) throw std::domain_error("distinguishable fourfold rate is zero");
    const double efficiency = std::pow(detector_eta, 4);

    ScanResult result;
    for (double z : z_values) {
        const double v = model.visibility(z);
        const double fourfold = fourfold_plus_plus_h(threefold, v);
        result.rows.push_back({z, v, fourfold / baseline, threefold.probability * fourfold * efficiency});
    }
    return result;
}

ScanResult overlap_scan(const OverlapModel& model, std::span<const double> z_values, Gain gain) {
    return overlap_scan(threefold_pipeline(QubitSpec::horizontal(), gain, EvolutionMethod::kFirstOrder),
                        model, z_values);
}

std::vector<CountRecord> monte_carlo_counts(const std::map<std::string, double>& probabilities,
                                            std::int64_t total_events, std::uint64_t seed,
                                            double duration_s) {
    if (total_events < 0) throw std::invalid_argument("total_events must be >= 0");
    double sum = 0.0;
    for (const auto& [label, p] : probabilities) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability for '" + label + "' outside [0, 1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("probabilities do not sum to 1");

    // Sequential conditional binomials give an exact multinomial draw.
    std::string last_positive;
    for (const auto& [label, p] : probabilities) {
        if (p > 0.0) last_positive = label;
    }
    std::mt19937_64 rng(seed);
    std::int64_t remaining = total_events;
    double mass_left = 1.0;
    std::vector<CountRecord> records;
    for (const auto& [label, p] : probabilities) {
        std::int64_t count = 0;
        if (label == last_positive) {
            count = remaining;
        } else if (remaining > 0 && p > 0.0) {
            const double q = std::min(1.0, p / mass_left);
            count = std::binomial_distribution<std::int64_t>(remaining, q)(rng);
        }
        remaining -= count;
        mass_left -= p;
        if (mass_left <= 0.0) mass_left = 0.0;
        records.push_back({label, p, count, duration_s, seed});
    }
    return records;
}

std::vector<std::int64_t> binomial_counts(std::span<const double> probabilities, std::int64_t trials,
                                          std::uint64_t seed) {
    if (trials < 0) throw std::invalid_argument("trials must be >= 0");
    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> out;
    out.reserve(probabilities.size());
    for (double p : probabilities) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
        out.push_back(std::binomial_distribution<std::int64_t>(trials, p)(rng));
    }
    return out;
}

std::map<std::string, double> apply_detector_efficiency(const std::map<std::string, double>& probabilities,
                                                        double eta, int n_detectors) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
    if (n_detectors < 0) throw std::invalid_argument("n_detectors must be >= 0");
    const double factor = std::pow(eta, n_detectors);
    std::map<std::string, double> out;
    for (const auto& [label, p] : probabilities) out[label] = p * factor;
    return out;
}

std::string to_json(const CountRecord& record) {
    nlohmann::ordered_json j;
    j["label"] = record.label;
    j["probability"] = record.probability;
    j["simulated_counts"] = record.simulated_counts;
    j["duration_s"] = record.duration_s;
    j["seed"] = record.seed;
    return j.dump();
}

std::string histogram_csv(const XyzHistogram& histogram) {
    CsvTable table({"xyz", "probability"});
    for (const auto& [label, p] : histogram) table.add_row({label, format_double(p)});
    return table.str();
}

}  // namespace qiopa
