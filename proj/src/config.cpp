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

#include "qiopa/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "qiopa/machines.hpp"

namespace qiopa {

std::vector<double> OverlapConfig::z_grid() const {
    std::vector<double> grid;
    if (z_points == 1) return {z_min};
    for (int i = 0; i < z_points; ++i) {
        grid.push_back(z_min + (z_max - z_min) * i / (z_points - 1));
    }
    return grid;
}

namespace {

using nlohmann::json;

/// Walks one JSON object, tracking which keys were consumed.
class Reader {
  public:
    Reader(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
        if (!j_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "expected an object");
    }

    template <typename T>
    void read(const char* key, T& target) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            target = j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(path(key), std::string("wrong type (") + e.what() + ")");
        }
    }

    Reader child(const char* key) {
        seen_.insert(key);
        static const json empty = json::object();
        return Reader(j_.contains(key) ? j_.at(key) : empty, path(key));
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) throw ConfigError(path(item.key()), "unknown key");
        }
    }

    std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  private:
    const json& j_;
    std::string prefix_;
    std::set<std::string> seen_;
};

void require(bool ok, const char* key, const char* message) {
    if (!ok) throw ConfigError(key, message);
}

}  // namespace

void validate(const ExperimentConfig& c) {
    require(std::isfinite(c.gain) && c.gain >= 0.0, "gain", "must be >= 0");
    require(c.method != EvolutionMethod::kFirstOrder || c.gain < kFirstOrderGainLimit, "gain",
            "first_order needs gain < 0.5");
    require(c.photon_cap >= 3, "photon_cap", "must be >= 3 to hold the emission branch");
    require(std::isfinite(c.theta), "psi.theta", "must be finite");
    require(std::isfinite(c.phi), "psi.phi", "must be finite");
    require(c.overlap.v_max >= 0.0 && c.overlap.v_max <= 1.0, "overlap.v_max", "must lie in [0, 1]");
    require(std::isfinite(c.overlap.sigma_z) && c.overlap.sigma_z > 0.0, "overlap.sigma_z", "must be > 0");
    require(std::isfinite(c.overlap.z_min) && std::isfinite(c.overlap.z_max), "overlap.z_min", "must be finite");
    require(c.overlap.z_max >= c.overlap.z_min, "overlap.z_max", "must be >= z_min");
    require(c.overlap.z_points >= 1, "overlap.z_points", "must be >= 1");
    require(c.monte_carlo.total_events >= 0, "monte_carlo.total_events", "must be >= 0");
    require(c.monte_carlo.duration_s >= 0.0, "monte_carlo.duration_s", "must be >= 0");
    require(c.detector_eta >= 0.0 && c.detector_eta <= 1.0, "detector_eta", "must lie in [0, 1]");
    require(c.universality.n >= 2, "universality.n", "need >= 2 Bloch points");
    require(c.universality.threshold >= 0.0, "universality.threshold", "must be >= 0");
    require(c.parallel >= 1, "parallel", "must be >= 1");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    Reader root(j, "");
    root.read("gain", c.gain);
    std::string method = method_name(c.method);
    root.read("method", method);
    try {
        c.method = parse_method(method);
    } catch (const std::invalid_argument&) {
        throw ConfigError("method", "expected first_order or exact");
    }
    root.read("photon_cap", c.photon_cap);
    root.read("detector_eta", c.detector_eta);
    root.read("parallel", c.parallel);

    Reader psi = root.child("psi");
    psi.read("theta", c.theta);
    psi.read("phi", c.phi);
    psi.finish();

    Reader overlap = root.child("overlap");
    overlap.read("v_max", c.overlap.v_max);
    overlap.read("sigma_z", c.overlap.sigma_z);
    overlap.read("z_min", c.overlap.z_min);
    overlap.read("z_max", c.overlap.z_max);
    overlap.read("z_points", c.overlap.z_points);
    overlap.finish();

    Reader mc = root.child("monte_carlo");
    mc.read("enabled", c.monte_carlo.enabled);
    mc.read("total_events", c.monte_carlo.total_events);
    mc.read("seed", c.monte_carlo.seed);
    mc.read("duration_s", c.monte_carlo.duration_s);
    mc.finish();

    Reader sweep = root.child("universality");
    sweep.read("n", c.universality.n);
    sweep.read("threshold", c.universality.threshold);
    sweep.finish();

    Reader output = root.child("output");
    output.read("dir", c.out_dir);
    output.read("dump_state", c.dump_state);
    output.finish();

    root.finish();
    validate(c);
    return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["gain"] = c.gain;
    j["method"] = method_name(c.method);
    j["photon_cap"] = c.photon_cap;
    j["psi"] = {{"theta", c.theta}, {"phi", c.phi}};
    j["overlap"] = {{"v_max", c.overlap.v_max},
                    {"sigma_z", c.overlap.sigma_z},
                    {"z_min", c.overlap.z_min},
                    {"z_max", c.overlap.z_max},
                    {"z_points", c.overlap.z_points}};
    j["monte_carlo"] = {{"enabled", c.monte_carlo.enabled},
                        {"total_events", c.monte_carlo.total_events},
                        {"seed", c.monte_carlo.seed},
                        {"duration_s", c.monte_carlo.duration_s}};
    j["detector_eta"] = c.detector_eta;
    j["universality"] = {{"n", c.universality.n}, {"threshold", c.universality.threshold}};
    j["parallel"] = c.parallel;
    j["output"] = {{"dir", c.out_dir}, {"dump_state", c.dump_state}};
    return nlohmann::json(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

}  // namespace qiopa
