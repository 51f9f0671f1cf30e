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

#include "qiopa/commands.hpp"

#include <cmath>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "qiopa/detection.hpp"
#include "qiopa/machines.hpp"
#include "qiopa/text_io.hpp"

namespace qiopa {

namespace {

namespace fs = std::filesystem;

/// Runs `body` after validation, mapping config errors to exit code 2.
template <typename Body>
int guarded(const ExperimentConfig& config, std::ostream& err, Body body) {
    try {
        validate(config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    return body();
}

FockState amplify(const ExperimentConfig& config, const FockState& injected, std::ostream& err) {
    const Gain gain(config.gain);
    const Evolution evolution = config.method == EvolutionMethod::kExact
                                    ? squeezer_evolve_exact(injected, gain)
                                    : squeezer_evolve_first_order(injected, gain, config.psi());
    if (evolution.truncated) {
        err << "warning: photon cap " << config.photon_cap << " truncates the evolution (leakage "
            << format_double(evolution.leakage) << ")\n";
    }
    return evolution.state;
}

void maybe_dump(const ExperimentConfig& config, const FockState& state) {
    if (!config.dump_state.empty()) write_file(config.dump_state, to_text(state));
}

}  // namespace

int cmd_histogram(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(config, err, [&] {
        const FockState injected = prepare_injection(config.psi(), make_opa_registry(config.photon_cap));
        const FockState split = apply_beamsplitter(amplify(config, injected, err));
        const PostSelection selected = postselect(split, CoincidencePattern::threefold());
        if (!selected.conditional) {
            err << "no coincidence support: the threefold pattern has zero probability\n";
            return static_cast<int>(kExitEmptyPostselection);
        }
        maybe_dump(config, *selected.conditional);

        const XyzHistogram histogram = histogram_xyz(*selected.conditional);
        const fs::path dir(config.out_dir);
        write_file(dir / "histogram.csv", histogram_csv(histogram));

        if (config.monte_carlo.enabled) {
            std::string lines;
            for (const auto& record : monte_carlo_counts(histogram, config.monte_carlo.total_events,
                                                         config.monte_carlo.seed, config.monte_carlo.duration_s)) {
                lines += to_json(record) + '\n';
            }
            write_file(dir / "counts.jsonl", lines);
        }

        // a, b and k2 detectors; the trigger arm is taken as given.
        const double detected = selected.probability * std::pow(config.detector_eta, 3);
        out << "threefold_probability " << format_double(selected.probability) << '\n'
            << "detected_probability " << format_double(detected) << '\n';
        for (const auto& [label, p] : histogram) out << label << ' ' << format_double(p) << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_fidelities(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(config, err, [&] {
        const QubitSpec psi = config.psi();
        const FockState injected = prepare_injection(psi, make_opa_registry(config.photon_cap));
        const FockState output = amplify(config, injected, err);
        maybe_dump(config, output);
        MachineReport report{psi, {}, config.method};
        try {
            const DensityOperator rho = clone_channel_density(output, psi);
            report.fidelities = {entangler_fidelity(rho), clone_fidelity(rho), unot_fidelity(output, psi)};
        } catch (const std::domain_error& e) {
            err << "no coincidence support: " << e.what() << '\n';
            return static_cast<int>(kExitEmptyPostselection);
        }
        const std::string line = to_json(report) + '\n';
        write_file(fs::path(config.out_dir) / "fidelities.json", line);
        out << line;
        return static_cast<int>(kExitOk);
    });
}

int cmd_universality(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(config, err, [&] {
        if (config.gain == 0.0) {
            err << "no coincidence support: gain is zero\n";
            return static_cast<int>(kExitEmptyPostselection);
        }
        const SweepResult sweep = universality_sweep(config.universality.n, Gain(config.gain), config.method,
                                                     config.photon_cap, config.parallel);
        std::string lines;
        for (const auto& report : sweep.reports) lines += to_json(report) + '\n';
        write_file(fs::path(config.out_dir) / "universality.jsonl", lines);

        const double threshold = config.universality.threshold;
        const bool pass = sweep.spread.entangler < threshold && sweep.spread.clone < threshold &&
                          sweep.spread.unot < threshold;
        nlohmann::ordered_json summary;
        summary["n"] = config.universality.n;
        summary["method"] = method_name(config.method);
        summary["spread_entangler"] = sweep.spread.entangler;
        summary["spread_clone"] = sweep.spread.clone;
        summary["spread_unot"] = sweep.spread.unot;
        summary["threshold"] = threshold;
        summary["pass"] = pass;
        out << summary.dump() << '\n';
        if (!pass) {
            err << "universality spread reached the threshold " << format_double(threshold) << '\n';
            return static_cast<int>(kExitThresholdFailure);
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_scan(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(config, err, [&] {
        const FockState injected = prepare_injection(config.psi(), make_opa_registry(config.photon_cap));
        const FockState split = apply_beamsplitter(amplify(config, injected, err));
        const PostSelection selected = postselect(split, CoincidencePattern::threefold());
        if (!selected.conditional) {
            err << "no coincidence support: the threefold pattern has zero probability\n";
            return static_cast<int>(kExitEmptyPostselection);
        }
        maybe_dump(config, *selected.conditional);

        const OverlapModel model(config.overlap.sigma_z, config.overlap.v_max);
        const std::vector<double> grid = config.overlap.z_grid();
        const ScanResult scan = overlap_scan(selected, model, grid, config.detector_eta);

        const bool noisy = config.monte_carlo.enabled;
        CsvTable table(noisy ? std::vector<std::string>{"z", "R", "counts", "stderr"}
                             : std::vector<std::string>{"z", "R"});
        std::vector<std::int64_t> counts;
        if (noisy) {
            std::vector<double> p;
            for (const auto& row : scan.rows) p.push_back(row.coincidence_probability);
            counts = binomial_counts(p, config.monte_carlo.total_events, config.monte_carlo.seed);
        }
        double peak = 0.0;
        for (std::size_t i = 0; i < scan.rows.size(); ++i) {
            const auto& row = scan.rows[i];
            peak = std::max(peak, row.ratio);
            std::vector<std::string> cells{format_double(row.z), format_double(row.ratio)};
            if (noisy) {
                const double n = static_cast<double>(config.monte_carlo.total_events);
                const double k = static_cast<double>(counts[i]);
                const double stderr_counts = n > 0 ? std::sqrt(k * (1.0 - k / n)) : 0.0;
                cells.push_back(std::to_string(counts[i]));
                cells.push_back(format_double(stderr_counts));
            }
            table.add_row(std::move(cells));
        }
        write_file(fs::path(config.out_dir) / "scan.csv", table.str());
        out << "peak_R " << format_double(peak) << '\n';
        return static_cast<int>(kExitOk);
    });
}

}  // namespace qiopa
