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

#include <ostream>

#include "qiopa/config.hpp"

namespace qiopa {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitEmptyPostselection = 3,
    kExitThresholdFailure = 4,
};

// Each command validates the config, writes its files under
// config.out_dir, prints a short summary to `out` and diagnostics to `err`,
// and returns one of the exit codes above.

/// histogram.csv (eight XYZ bins) and, with Monte Carlo on, counts.jsonl.
/// --dump-state receives the post-selected conditional state.
int cmd_histogram(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// fidelities.json with one MachineReport. --dump-state receives the
/// amplifier output.
int cmd_fidelities(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// universality.jsonl (one report per Bloch point) plus a summary line;
/// kExitThresholdFailure if any spread reaches the threshold.
int cmd_universality(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// scan.csv with columns z,R and, with Monte Carlo on, counts,stderr.
int cmd_scan(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qiopa
