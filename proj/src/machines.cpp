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

#include "qiopa/machines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace qiopa {

namespace {

const std::vector<PhotonConstraint>& emission_branch() {
    static const std::vector<PhotonConstraint> constraints = {
        {std::string(modes::kCloning), 2}, {std::string(modes::kAnticloning), 1}};
    return constraints;
}

FockState emission_component(const FockState& output) {
    FockState branch = project(output, emission_branch());
    if (branch.norm2() == 0.0) {
        throw std::domain_error("no weight in the two-photon emission branch");
    }
    return branch;
}

void require_clone_basis(const DensityOperator& rho) {
    if (rho.labels() != kCloneBasisLabels) {
        throw std::invalid_argument("density operator is not in the psi-adapted clone basis");
    }
}

}  // namespace

FockState amplifier_output(const QubitSpec& psi, Gain gain, EvolutionMethod method, int photon_cap) {
    const FockState injected = prepare_injection(psi, make_opa_registry(photon_cap));
    return method == EvolutionMethod::kExact ? squeezer_evolve_exact(injected, gain).state
                                             : squeezer_evolve_first_order(injected, gain, psi).state;
}

DensityOperator clone_channel_density(const FockState& output, const QubitSpec& psi) {
    const FockState branch = emission_component(output);
    const auto& registry = output.registry();
    const auto k1 = registry.spatial_modes(modes::kCloning);
    const DensityOperator rho_hv = reduced_density(branch, k1);

    // psi-adapted two-photon states of k1, written on the k1 occupations.
    const auto a_psi = polarized_creation(registry, modes::kCloning, psi);
    const auto a_perp = polarized_creation(registry, modes::kCloning, psi.orthogonal());
    const FockState vacuum = FockState::vacuum(output.registry_ptr());
    const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    const FockState targets[] = {
        apply_creation(apply_creation(vacuum, a_psi), a_psi).scaled(inv_sqrt2),
        apply_creation(apply_creation(vacuum, a_perp), a_psi),
        apply_creation(apply_creation(vacuum, a_perp), a_perp).scaled(inv_sqrt2),
    };

    Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(rho_hv.dim(), 3);
    for (int col = 0; col < 3; ++col) {
        for (const auto& [occupation, amplitude] : restrict_to_modes(targets[col], k1)) {
            const auto label = format_occupation(occupation);
            const auto it = std::find(rho_hv.labels().begin(), rho_hv.labels().end(), label);
            if (it != rho_hv.labels().end()) basis(it - rho_hv.labels().begin(), col) = amplitude;
        }
    }
    DensityOperator rho = rho_hv.in_basis(kCloneBasisLabels, basis);
    rho.validate();
    return rho;
}

double entangler_fidelity(const DensityOperator& rho) {
    require_clone_basis(rho);
    return rho.element(1, 1).real();
}

double clone_fidelity(const DensityOperator& rho) {
    require_clone_basis(rho);
    // Embed the symmetric subspace into two qubits: |00>, (|01>+|10>)/sqrt2, |11>.
    Eigen::MatrixXcd embed = Eigen::MatrixXcd::Zero(4, 3);
    embed(0, 0) = 1.0;
    embed(1, 1) = embed(2, 1) = std::numbers::sqrt2 / 2.0;
    embed(3, 2) = 1.0;
    const Eigen::MatrixXcd two_qubit = embed * rho.matrix() * embed.adjoint();
    // <0|Tr_2(rho)|0> = rho_{00,00} + rho_{01,01}.
    return (two_qubit(0, 0) + two_qubit(1, 1)).real();
}

DensityOperator anticlone_channel_density(const FockState& output) {
    const FockState branch = emission_component(output);
    const auto& registry = output.registry();
    const auto k2h = registry.index_of(modes::kAnticloning, modes::kH);
    const auto k2v = registry.index_of(modes::kAnticloning, modes::kV);
    const std::size_t kept[] = {k2h, k2v};
    const DensityOperator rho_occ = reduced_density(branch, kept);

    Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(rho_occ.dim(), 2);
    for (Eigen::Index i = 0; i < rho_occ.dim(); ++i) {
        const auto& label = rho_occ.labels()[i];
        if (label == "1,0") basis(i, 0) = 1.0;
        if (label == "0,1") basis(i, 1) = 1.0;
    }
    DensityOperator rho = rho_occ.in_basis({"H", "V"}, basis);
    rho.validate();
    return rho;
}

double unot_fidelity(const FockState& output, const QubitSpec& psi) {
    const QubitSpec flipped = psi.orthogonal();
    Eigen::Vector2cd target(flipped.alpha(), flipped.beta());
    return anticlone_channel_density(output).expectation(target);
}

MachineReport evaluate_machines(const QubitSpec& psi, Gain gain, EvolutionMethod method, int photon_cap) {
    const FockState output = amplifier_output(psi, gain, method, photon_cap);
    const DensityOperator rho = clone_channel_density(output, psi);
    return MachineReport{psi, {entangler_fidelity(rho), clone_fidelity(rho), unot_fidelity(output, psi)}, method};
}

std::vector<QubitSpec> fibonacci_bloch_points(int n, double rotation) {
    if (n < 1) throw std::invalid_argument("need at least one Bloch point");
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<QubitSpec> points;
    points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double phi = std::fmod(i * golden_angle + rotation, 2.0 * std::numbers::pi);
        points.push_back(QubitSpec::from_bloch(std::acos(z), phi));
    }
    return points;
}

SweepResult universality_sweep(const std::vector<QubitSpec>& psis, Gain gain, EvolutionMethod method,
                               int photon_cap, int parallel) {
    if (psis.empty()) throw std::invalid_argument("universality sweep needs at least one input");
    std::vector<std::optional<MachineReport>> slots(psis.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < psis.size(); i = next++) {
            slots[i] = evaluate_machines(psis[i], gain, method, photon_cap);
        }
    };
    const int threads = std::clamp(parallel, 1, static_cast<int>(psis.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    SweepResult result;
    for (auto& slot : slots) result.reports.push_back(std::move(*slot));

    auto spread = [&](auto field) {
        const auto [lo, hi] = std::minmax_element(
            result.reports.begin(), result.reports.end(),
            [&](const MachineReport& x, const MachineReport& y) { return field(x) < field(y); });
        return field(*hi) - field(*lo);
    };
    result.spread.entangler = spread([](const MachineReport& r) { return r.fidelities.entangler; });
    result.spread.clone = spread([](const MachineReport& r) { return r.fidelities.clone; });
    result.spread.unot = spread([](const MachineReport& r) { return r.fidelities.unot; });
    return result;
}

SweepResult universality_sweep(int n, Gain gain, EvolutionMethod method, int photon_cap, int parallel) {
    if (n < 2) throw std::invalid_argument("universality sweep needs n >= 2");
    return universality_sweep(fibonacci_bloch_points(n), gain, method, photon_cap, parallel);
}

std::string method_name(EvolutionMethod method) {
    return method == EvolutionMethod::kExact ? "exact" : "first_order";
}

EvolutionMethod parse_method(std::string_view text) {
    if (text == "exact") return EvolutionMethod::kExact;
    if (text == "first_order" || text == "first-order") return EvolutionMethod::kFirstOrder;
    throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

std::string to_json(const MachineReport& report) {
    nlohmann::ordered_json j;
    j["theta"] = report.psi.theta();
    j["phi"] = report.psi.phi();
    j["alpha"] = {report.psi.alpha().real(), report.psi.alpha().imag()};
    j["beta"] = {report.psi.beta().real(), report.psi.beta().imag()};
    j["method"] = method_name(report.method);
    j["entangler_fidelity"] = report.fidelities.entangler;
    j["clone_fidelity"] = report.fidelities.clone;
    j["unot_fidelity"] = report.fidelities.unot;
    return j.dump();
}

}  // namespace qiopa
