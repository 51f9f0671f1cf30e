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

#include <string>
#include <vector>

#include "qiopa/density.hpp"
#include "qiopa/fock.hpp"
#include "qiopa/optics.hpp"

namespace qiopa {

// Evaluators for the three machines carried by the amplifier output: the
// universal entangler and the 1->2 cloner on the cloning channel k1, and
// the universal NOT on the anticloning channel k2. All of them condition
// on the emission branch: exactly two photons in k1 and one in k2.

/// Labels of the psi-adapted symmetric two-photon basis, in this order.
inline const std::vector<std::string> kCloneBasisLabels = {"psi,psi", "{psi,psiperp}", "psiperp,psiperp"};

struct FidelityTriple {
    double entangler = 0.0;
    double clone = 0.0;
    double unot = 0.0;
};

struct MachineReport {
    QubitSpec psi;
    FidelityTriple fidelities;
    EvolutionMethod method;
};

/// Post-amplifier state for an injected qubit psi.
FockState amplifier_output(const QubitSpec& psi, Gain gain, EvolutionMethod method,
                           int photon_cap = kDefaultPhotonCap);

/// Two-photon polarization state of k1 in the basis (|psi psi>,
/// |{psi, psi_perp}>, |psi_perp psi_perp>), conditioned on two photons in
/// k1 and one in k2. Throws std::domain_error if that branch is empty.
DensityOperator clone_channel_density(const FockState& output, const QubitSpec& psi);

/// <{psi,psi_perp}|rho|{psi,psi_perp}> for rho from clone_channel_density.
double entangler_fidelity(const DensityOperator& rho);

/// <psi|rho_1|psi>, rho_1 being the single-clone reduction of rho. rho must
/// come from clone_channel_density, which already fixes psi.
double clone_fidelity(const DensityOperator& rho);

/// Conditional polarization state of k2 (labels "H", "V").
DensityOperator anticlone_channel_density(const FockState& output);

/// <psi_perp|rho_AC|psi_perp>.
double unot_fidelity(const FockState& output, const QubitSpec& psi);

MachineReport evaluate_machines(const QubitSpec& psi, Gain gain, EvolutionMethod method,
                                int photon_cap = kDefaultPhotonCap);

/// n points on the Bloch sphere from a Fibonacci lattice; `rotation` offsets
/// every azimuth.
std::vector<QubitSpec> fibonacci_bloch_points(int n, double rotation = 0.0);

struct SweepResult {
    std::vector<MachineReport> reports;
    /// max - min of each fidelity over the sweep.
    FidelityTriple spread;
};

/// Evaluates each psi (optionally on `parallel` threads); report order
/// follows `psis`.
SweepResult universality_sweep(const std::vector<QubitSpec>& psis, Gain gain, EvolutionMethod method,
                               int photon_cap = kDefaultPhotonCap, int parallel = 1);

/// Throws std::invalid_argument for n < 2.
SweepResult universality_sweep(int n, Gain gain, EvolutionMethod method,
                               int photon_cap = kDefaultPhotonCap, int parallel = 1);

std::string method_name(EvolutionMethod method);
/// Accepts "first_order", "first-order" and "exact".
EvolutionMethod parse_method(std::string_view text);

/// One-line JSON object.
std::string to_json(const MachineReport& report);

}  // namespace qiopa
