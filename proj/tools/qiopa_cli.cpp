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

// qiopa: run the amplifier experiments from the command line.
//
//   qiopa histogram   [--config cfg.json] [--out DIR] [--method exact] ...
//   qiopa fidelities  ...
//   qiopa universality --n 50 --threshold 1e-8 ...
//   qiopa scan        --v-max 0.68 --sigma-z 20 ...

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qiopa/commands.hpp"
#include "qiopa/machines.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> method;
    std::optional<double> gain;
    std::optional<std::string> dump_state;
    std::optional<int> photon_cap;
    std::optional<double> theta;
    std::optional<double> phi;
    std::optional<double> v_max;
    std::optional<double> sigma_z;
    std::optional<double> eta;
    std::optional<std::int64_t> events;
    std::optional<int> parallel;
    std::optional<int> n;
    std::optional<double> threshold;
    bool monte_carlo = false;
};

qiopa::ExperimentConfig resolve(const Overrides& o) {
    qiopa::ExperimentConfig c = o.config_path.empty() ? qiopa::ExperimentConfig{} : qiopa::load_config(o.config_path);
    if (o.out_dir) c.out_dir = *o.out_dir;
    if (o.seed) c.monte_carlo.seed = *o.seed;
    if (o.method) {
        try {
            c.method = qiopa::parse_method(*o.method);
        } catch (const std::invalid_argument&) {
            throw qiopa::ConfigError("--method", "expected first-order or exact");
        }
    }
    if (o.gain) c.gain = *o.gain;
    if (o.dump_state) c.dump_state = *o.dump_state;
    if (o.photon_cap) c.photon_cap = *o.photon_cap;
    if (o.theta) c.theta = *o.theta;
    if (o.phi) c.phi = *o.phi;
    if (o.v_max) c.overlap.v_max = *o.v_max;
    if (o.sigma_z) c.overlap.sigma_z = *o.sigma_z;
    if (o.eta) c.detector_eta = *o.eta;
    if (o.events) c.monte_carlo.total_events = *o.events;
    if (o.parallel) c.parallel = *o.parallel;
    if (o.n) c.universality.n = *o.n;
    if (o.threshold) c.universality.threshold = *o.threshold;
    if (o.monte_carlo) c.monte_carlo.enabled = true;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-injected parametric amplifier simulator"};
    app.require_subcommand(1);
    Overrides o;

    app.add_option("--config", o.config_path, "JSON experiment config");
    app.add_option("--out", o.out_dir, "Output directory");
    app.add_option("--seed", o.seed, "Monte Carlo seed");
    app.add_option("--method", o.method, "first-order | exact");
    app.add_option("--gain", o.gain, "Amplifier gain g");
    app.add_option("--dump-state", o.dump_state, "Write the final state in canonical text form");
    app.add_option("--cap", o.photon_cap, "Photon-number cap");
    app.add_option("--theta", o.theta, "Input qubit Bloch polar angle (rad)");
    app.add_option("--phi", o.phi, "Input qubit Bloch azimuth (rad)");
    app.add_option("--v-max", o.v_max, "Peak mode overlap");
    app.add_option("--sigma-z", o.sigma_z, "Gaussian overlap width (um)");
    app.add_option("--eta", o.eta, "Detector quantum efficiency");
    app.add_option("--events", o.events, "Monte Carlo event count");
    app.add_flag("--monte-carlo", o.monte_carlo, "Add a Monte Carlo counting layer");
    app.add_option("--parallel", o.parallel, "Worker threads for sweeps");

    auto* histogram = app.add_subcommand("histogram", "XYZ coincidence histogram");
    auto* fidelities = app.add_subcommand("fidelities", "Entangler, clone and U-NOT fidelities");
    auto* universality = app.add_subcommand("universality", "Fidelity spread over the Bloch sphere");
    universality->add_option("--n", o.n, "Number of Bloch points");
    universality->add_option("--threshold", o.threshold, "Maximum allowed spread");
    auto* scan = app.add_subcommand("scan", "Coincidence ratio versus mirror position");
    for (auto* sub : {histogram, fidelities, universality, scan}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qiopa::kExitConfigError;
    }

    try {
        const qiopa::ExperimentConfig config = resolve(o);
        if (*histogram) return qiopa::cmd_histogram(config, std::cout, std::cerr);
        if (*fidelities) return qiopa::cmd_fidelities(config, std::cout, std::cerr);
        if (*universality) return qiopa::cmd_universality(config, std::cout, std::cerr);
        return qiopa::cmd_scan(config, std::cout, std::cerr);
    } catch (const qiopa::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return qiopa::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
