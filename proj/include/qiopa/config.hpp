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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qiopa/fock.hpp"
#include "qiopa/optics.hpp"

namespace qiopa {

/// Invalid experiment configuration; key() is the dotted path of the
/// offending entry, e.g. "overlap.sigma_z".
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

  private:
    std::string key_;
};

struct OverlapConfig {
    double v_max = 1.0;
    double sigma_z = 20.0;  // um
    double z_min = -100.0;
    double z_max = 100.0;
    int z_points = 41;

    std::vector<double> z_grid() const;
    bool operator==(const OverlapConfig&) const = default;
};

struct MonteCarloConfig {
    bool enabled = false;
    std::int64_t total_events = 600;
    std::uint64_t seed = 1;
    double duration_s = 2400.0;
    bool operator==(const MonteCarloConfig&) const = default;
};

struct UniversalityConfig {
    int n = 50;
    /// The sweep fails unless every spread is strictly below this.
    double threshold = 1e-8;
    bool operator==(const UniversalityConfig&) const = default;
};

struct ExperimentConfig {
    double gain = 0.1;
    EvolutionMethod method = EvolutionMethod::kFirstOrder;
    int photon_cap = kDefaultPhotonCap;
    double theta = 0.0;
    double phi = 0.0;
    OverlapConfig overlap;
    MonteCarloConfig monte_carlo;
    double detector_eta = 1.0;
    UniversalityConfig universality;
    int parallel = 1;
    std::string out_dir = "out";
    std::string dump_state;

    QubitSpec psi() const { return QubitSpec::from_bloch(theta, phi); }
    bool operator==(const ExperimentConfig&) const = default;
};

/// Missing keys keep their defaults; unknown keys and out-of-range values
/// throw ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Range checks shared by the file loader and command-line overrides.
void validate(const ExperimentConfig& config);

}  // namespace qiopa
