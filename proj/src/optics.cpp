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

#include "qiopa/optics.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qiopa {

RegistryPtr make_opa_registry(int photon_cap) {
    std::vector<Mode> layout;
    for (auto spatial : {modes::kCloning, modes::kAnticloning, modes::kPortA, modes::kPortB}) {
        for (auto polarization : {modes::kH, modes::kV}) {
            layout.push_back(Mode{std::string(spatial), std::string(polarization)});
        }
    }
    return make_registry(std::move(layout), photon_cap);
}

// ---------------------------------------------------------------------------
// QubitSpec / Gain

QubitSpec::QubitSpec(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta) {
    const double n2 = std::norm(alpha_) + std::norm(beta_);
    if (!(std::abs(n2 - 1.0) <= 1e-12)) {
        throw std::invalid_argument("qubit amplitudes are not normalized");
    }
}

QubitSpec QubitSpec::from_bloch(double theta, double phi) {
    return {std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)};
}

QubitSpec QubitSpec::diagonal() {
    return {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
}

QubitSpec QubitSpec::antidiagonal() {
    return {std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0};
}

double QubitSpec::theta() const {
    return 2.0 * std::atan2(std::abs(beta_), std::abs(alpha_));
}

double QubitSpec::phi() const {
    if (std::abs(alpha_) == 0.0 || std::abs(beta_) == 0.0) return 0.0;
    return std::arg(beta_ * std::conj(alpha_));
}

QubitSpec QubitSpec::with_global_phase(double phase) const {
    const Complex factor = std::polar(1.0, phase);
    return {alpha_ * factor, beta_ * factor};
}

Complex overlap(const QubitSpec& lhs, const QubitSpec& rhs) {
    return std::conj(lhs.alpha()) * rhs.alpha() + std::conj(lhs.beta()) * rhs.beta();
}

Gain::Gain(double value) : value_(value) {
    if (!std::isfinite(value_) || value_ < 0.0) {
        throw std::invalid_argument("gain must be a finite non-negative number");
    }
}

// ---------------------------------------------------------------------------
// Injection and amplification

std::vector<ModeTerm> polarized_creation(const ModeRegistry& registry, std::string_view spatial,
                                         const QubitSpec& polarization) {
    return {{registry.index_of(spatial, modes::kH), polarization.alpha()},
            {registry.index_of(spatial, modes::kV), polarization.beta()}};
}

FockState prepare_injection(const QubitSpec& psi, RegistryPtr registry) {
    // Validate the whole layout up front so a missing k2 fails here.
    for (auto spatial : {modes::kCloning, modes::kAnticloning}) {
        registry->index_of(spatial, modes::kH);
        registry->index_of(spatial, modes::kV);
    }
    const auto creation = polarized_creation(*registry, modes::kCloning, psi);
    return apply_creation(FockState::vacuum(registry), creation).pruned(0.0);
}

bool is_injection_form(const FockState& state) {
    const auto k1 = state.registry().spatial_modes(modes::kCloning);
    for (const auto& [occupation, amplitude] : state.terms()) {
        int in_k1 = 0;
        for (std::size_t mode : k1) in_k1 += occupation[mode];
        if (in_k1 != 1 || total_photons(occupation) != 1) return false;
    }
    return !state.is_zero();
}

namespace {

/// a_x^dag b_y^dag |state> for two single-mode combinations.
FockState create_pair(const FockState& state, std::span<const ModeTerm> first,
                      std::span<const ModeTerm> second) {
    return apply_creation(apply_creation(state, second), first);
}

/// P|state> with P = a_H^dag b_V^dag - a_V^dag b_H^dag on (k1, k2).
FockState pair_creation(const FockState& state) {
    const auto& registry = state.registry();
    const ModeTerm k1h{registry.index_of(modes::kCloning, modes::kH), 1.0};
    const ModeTerm k1v{registry.index_of(modes::kCloning, modes::kV), 1.0};
    const ModeTerm k2h{registry.index_of(modes::kAnticloning, modes::kH), 1.0};
    const ModeTerm k2v{registry.index_of(modes::kAnticloning, modes::kV), 1.0};
    return create_pair(state, {&k1h, 1}, {&k2v, 1}) - create_pair(state, {&k1v, 1}, {&k2h, 1});
}

/// P^dag|state>.
FockState pair_annihilation(const FockState& state) {
    const auto& registry = state.registry();
    const auto k1h = registry.index_of(modes::kCloning, modes::kH);
    const auto k1v = registry.index_of(modes::kCloning, modes::kV);
    const auto k2h = registry.index_of(modes::kAnticloning, modes::kH);
    const auto k2v = registry.index_of(modes::kAnticloning, modes::kV);
    return apply_annihilation(apply_annihilation(state, k2v), k1h) -
           apply_annihilation(apply_annihilation(state, k2h), k1v);
}

double matrix_norm1(const Eigen::MatrixXd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

Evolution squeezer_evolve_first_order(const FockState& state, Gain gain, const QubitSpec& psi_basis) {
    if (gain.value() >= kFirstOrderGainLimit) {
        throw std::out_of_range("first-order evolution requires g < 0.5");
    }
    const auto& registry = state.registry();
    const QubitSpec perp = psi_basis.orthogonal();
    const auto a_psi = polarized_creation(registry, modes::kCloning, psi_basis);
    const auto a_perp = polarized_creation(registry, modes::kCloning, perp);
    const auto b_psi = polarized_creation(registry, modes::kAnticloning, psi_basis);
    const auto b_perp = polarized_creation(registry, modes::kAnticloning, perp);

    const FockState emitted = create_pair(state, a_psi, b_perp) - create_pair(state, a_perp, b_psi);
    FockState out = (state + gain.value() * emitted).pruned();
    return Evolution{out, out.truncated(), 0.0, is_injection_form(state)};
}

Eigen::MatrixXd expm_scaled_taylor(const Eigen::MatrixXd& generator) {
    const Eigen::Index n = generator.rows();
    if (generator.cols() != n) throw std::invalid_argument("expm: matrix must be square");

    int squarings = 0;
    double scale = 1.0;
    const double norm = matrix_norm1(generator);
    while (norm * scale >= 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    const Eigen::MatrixXd scaled = generator * scale;

    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k < 200; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        result += term;
        // With ||scaled|| < 1/2 the remaining tail is at most ||term||.
        if (matrix_norm1(term) < 1e-12) break;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

Evolution squeezer_evolve_exact(const FockState& state, Gain gain) {
    const RegistryPtr& registry = state.registry_ptr();

    // Breadth-first closure of the input support under K.
    std::map<Occupation, Eigen::Index> index;
    std::vector<Occupation> order;
    std::vector<FockState> columns;
    std::deque<Occupation> pending;
    auto visit = [&](const Occupation& occupation) {
        if (index.emplace(occupation, static_cast<Eigen::Index>(order.size())).second) {
            order.push_back(occupation);
            pending.push_back(occupation);
        }
    };
    for (const auto& [occupation, amplitude] : state.terms()) visit(occupation);
    while (!pending.empty()) {
        const Occupation occupation = pending.front();
        pending.pop_front();
        const FockState unit = FockState::basis(registry, occupation);
        FockState image = pair_creation(unit) - pair_annihilation(unit);
        for (const auto& [next, amplitude] : image.terms()) {
            if (amplitude != 0.0) visit(next);
        }
        columns.push_back(std::move(image));
    }

    const auto dim = static_cast<Eigen::Index>(order.size());
    Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        for (const auto& [row_occupation, amplitude] : columns[col].terms()) {
            generator(index.at(row_occupation), col) = amplitude.real();
        }
    }

    const Eigen::MatrixXd propagator = expm_scaled_taylor(gain.value() * generator);
    Eigen::VectorXcd input = Eigen::VectorXcd::Zero(dim);
    for (const auto& [occupation, amplitude] : state.terms()) input(index.at(occupation)) = amplitude;
    const Eigen::VectorXcd output = propagator.cast<Complex>() * input;

    FockState::Terms terms;
    for (Eigen::Index i = 0; i < dim; ++i) terms.emplace(order[i], output(i));
    FockState evolved = FockState(registry, std::move(terms), state.truncated()).pruned();

    // Leakage estimate: one more generator step on a registry with room for
    // one extra pair.
    const auto roomy = make_registry(registry->modes(), registry->photon_cap() + 2);
    const FockState pushed = pair_creation(rehome(evolved, roomy));
    const double leakage = gain.value() * gain.value() * weight_above(pushed, registry->photon_cap());
    const bool truncated = state.truncated() || leakage > kLeakageFlagThreshold;

    return Evolution{evolved.with_truncated(truncated), truncated, leakage, is_injection_form(state)};
}

// ---------------------------------------------------------------------------
// Linear mode transformations

ModeMap ModeMap::adjoint() const {
    std::map<std::size_t, std::vector<ModeTerm>> reversed;
    for (const auto& rule : rules) {
        for (const auto& out : rule.outputs) {
            reversed[out.mode].push_back({rule.input, std::conj(out.coefficient)});
        }
    }
    ModeMap result;
    for (auto& [mode, outputs] : reversed) result.rules.push_back({mode, std::move(outputs)});
    return result;
}

FockState apply_mode_map(const FockState& state, const ModeMap& map) {
    const auto& registry = state.registry();
    std::vector<const ModeMap::Rule*> rule_for(registry.size(), nullptr);
    for (const auto& rule : map.rules) {
        if (rule.input >= registry.size()) throw std::invalid_argument("mode map input not registered");
        if (rule_for[rule.input]) throw std::invalid_argument("mode map lists an input twice");
        for (const auto& out : rule.outputs) {
            if (out.mode >= registry.size()) throw std::invalid_argument("mode map output not registered");
        }
        rule_for[rule.input] = &rule;
    }

    FockState result(state.registry_ptr());
    for (const auto& [occupation, amplitude] : state.terms()) {
        // |n> = prod_i (a_i^dag)^{n_i} / sqrt(n_i!) |rest>, substituted per mapped mode.
        Occupation rest = occupation;
        double factorials = 1.0;
        for (std::size_t mode = 0; mode < rest.size(); ++mode) {
            if (!rule_for[mode]) continue;
            for (int k = 2; k <= rest[mode]; ++k) factorials *= k;
            rest[mode] = 0;
        }
        FockState partial = FockState::basis(state.registry_ptr(), rest, amplitude / std::sqrt(factorials));
        for (std::size_t mode = 0; mode < occupation.size(); ++mode) {
            if (!rule_for[mode]) continue;
            for (int k = 0; k < occupation[mode]; ++k) {
                partial = apply_creation(partial, rule_for[mode]->outputs);
            }
        }
        result = result + partial;
    }
    return result.pruned().with_truncated(state.truncated() || result.truncated());
}

ModeMap beamsplitter_map(const ModeRegistry& registry, std::string_view input,
                         std::string_view output_a, std::string_view output_b) {
    const double r = std::numbers::sqrt2 / 2.0;
    ModeMap map;
    for (auto polarization : {modes::kH, modes::kV}) {
        map.rules.push_back({registry.index_of(input, polarization),
                             {{registry.index_of(output_a, polarization), r},
                              {registry.index_of(output_b, polarization), r}}});
    }
    return map;
}

FockState apply_beamsplitter(const FockState& state, std::string_view input,
                             std::string_view output_a, std::string_view output_b) {
    const auto& registry = state.registry();
    const auto map = beamsplitter_map(registry, input, output_a, output_b);
    std::vector<std::size_t> outputs = registry.spatial_modes(output_a);
    for (std::size_t mode : registry.spatial_modes(output_b)) outputs.push_back(mode);
    for (const auto& [occupation, amplitude] : state.terms()) {
        for (std::size_t mode : outputs) {
            if (occupation[mode] != 0 && amplitude != 0.0) {
                throw std::invalid_argument("beamsplitter output port '" + registry.mode(mode).label() +
                                            "' is occupied");
            }
        }
    }
    return apply_mode_map(state, map);
}

Eigen::Matrix2cd jones_matrix(WaveplateKind kind, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Complex i{0.0, 1.0};
    Eigen::Matrix2cd m;
    switch (kind) {
        case WaveplateKind::kHalf:
            m << std::cos(2 * angle), std::sin(2 * angle), std::sin(2 * angle), -std::cos(2 * angle);
            break;
        case WaveplateKind::kQuarter:
            m << c * c + i * s * s, (1.0 - i) * s * c, (1.0 - i) * s * c, s * s + i * c * c;
            break;
    }
    return m;
}

ModeMap waveplate_map(const ModeRegistry& registry, std::string_view spatial, double angle,
                      WaveplateKind kind) {
    const Eigen::Matrix2cd jones = jones_matrix(kind, angle);
    const std::size_t h = registry.index_of(spatial, modes::kH);
    const std::size_t v = registry.index_of(spatial, modes::kV);
    // Column j of the Jones matrix is the image of basis polarization j.
    return ModeMap{{{h, {{h, jones(0, 0)}, {v, jones(1, 0)}}},
                    {v, {{h, jones(0, 1)}, {v, jones(1, 1)}}}}};
}

FockState apply_waveplate(const FockState& state, std::string_view spatial, double angle,
                          WaveplateKind kind) {
    return apply_mode_map(state, waveplate_map(state.registry(), spatial, angle, kind));
}

// ---------------------------------------------------------------------------
// Element dispatch

namespace {

struct ElementApplier {
    const FockState& state;

    FockState operator()(const element::Squeezer& e) const {
        return e.method == EvolutionMethod::kExact ? squeezer_evolve_exact(state, e.gain).state
                                                   : squeezer_evolve_first_order(state, e.gain, e.basis).state;
    }
    FockState operator()(const element::Beamsplitter& e) const {
        return apply_beamsplitter(state, e.input, e.output_a, e.output_b);
    }
    FockState operator()(const element::Waveplate& e) const {
        return apply_waveplate(state, e.spatial, e.angle, e.kind);
    }
    FockState operator()(const element::PolarizationSort& e) const {
        state.registry().spatial_modes(e.spatial);
        return state;
    }
};

}  // namespace

FockState apply_element(const OpticalElement& element, const FockState& state) {
    return std::visit(ElementApplier{state}, element);
}

Eigen::MatrixXcd element_matrix(const OpticalElement& element, const RegistryPtr& registry,
                                const std::vector<Occupation>& columns) {
    const auto rows = enumerate_basis(*registry);
    std::map<Occupation, Eigen::Index> row_index;
    for (std::size_t i = 0; i < rows.size(); ++i) row_index.emplace(rows[i], static_cast<Eigen::Index>(i));

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()),
                                                static_cast<Eigen::Index>(columns.size()));
    for (std::size_t col = 0; col < columns.size(); ++col) {
        const FockState image = apply_element(element, FockState::basis(registry, columns[col]));
        for (const auto& [occupation, amplitude] : image.terms()) {
            m(row_index.at(occupation), static_cast<Eigen::Index>(col)) = amplitude;
        }
    }
    return m;
}

}  // namespace qiopa
