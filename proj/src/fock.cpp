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

#include "qiopa/fock.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qiopa/text_io.hpp"

namespace qiopa {

ModeRegistry::ModeRegistry(std::vector<Mode> modes, int photon_cap)
    : modes_(std::move(modes)), photon_cap_(photon_cap) {
    if (photon_cap_ < 1) {
        throw std::invalid_argument("photon_cap must be >= 1");
    }
    std::set<std::string> seen;
    for (const auto& mode : modes_) {
        if (!seen.insert(mode.label()).second) {
            throw std::invalid_argument("duplicate mode label '" + mode.label() + "'");
        }
    }
}

std::optional<std::size_t> ModeRegistry::find(std::string_view spatial,
                                              std::string_view polarization) const {
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (modes_[i].spatial == spatial && modes_[i].polarization == polarization) return i;
    }
    return std::nullopt;
}

std::size_t ModeRegistry::index_of(std::string_view spatial, std::string_view polarization) const {
    if (auto index = find(spatial, polarization)) return *index;
    throw std::invalid_argument("unknown mode '" + std::string(spatial) + std::string(polarization) +
                                "'");
}

std::size_t ModeRegistry::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (modes_[i].label() == label) return i;
    }
    throw std::invalid_argument("unknown mode '" + std::string(label) + "'");
}

std::vector<std::size_t> ModeRegistry::spatial_modes(std::string_view spatial) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (modes_[i].spatial == spatial) out.push_back(i);
    }
    if (out.empty()) {
        throw std::invalid_argument("unknown spatial mode '" + std::string(spatial) + "'");
    }
    return out;
}

bool ModeRegistry::is_valid(const Occupation& occupation) const {
    if (occupation.size() != modes_.size()) return false;
    if (std::any_of(occupation.begin(), occupation.end(), [](int n) { return n < 0; })) return false;
    return total_photons(occupation) <= photon_cap_;
}

RegistryPtr make_registry(std::vector<Mode> modes, int photon_cap) {
    return std::make_shared<const ModeRegistry>(std::move(modes), photon_cap);
}

int total_photons(const Occupation& occupation) {
    return std::accumulate(occupation.begin(), occupation.end(), 0);
}

namespace {

void enumerate_into(std::size_t position, int remaining, Occupation& current,
                    std::vector<Occupation>& out) {
    if (position == current.size()) {
        out.push_back(current);
        return;
    }
    for (int n = 0; n <= remaining; ++n) {
        current[position] = n;
        enumerate_into(position + 1, remaining - n, current, out);
    }
    current[position] = 0;
}

void require_same_registry(const FockState& lhs, const FockState& rhs) {
    if (lhs.registry_ptr() != rhs.registry_ptr() && !(lhs.registry() == rhs.registry())) {
        throw std::invalid_argument("states live on different mode registries");
    }
}

void require_mode(const ModeRegistry& registry, std::size_t mode) {
    if (mode >= registry.size()) {
        throw std::invalid_argument("mode index " + std::to_string(mode) + " is not registered");
    }
}

}  // namespace

std::vector<Occupation> enumerate_basis(const ModeRegistry& registry) {
    std::vector<Occupation> out;
    Occupation current(registry.size(), 0);
    enumerate_into(0, registry.photon_cap(), current, out);
    // Depth-first with increasing counts already yields lexicographic order.
    return out;
}

FockState::FockState(RegistryPtr registry) : registry_(std::move(registry)) {
    if (!registry_) throw std::invalid_argument("FockState: null registry");
}

FockState::FockState(RegistryPtr registry, Terms terms, bool truncated)
    : registry_(std::move(registry)), terms_(std::move(terms)), truncated_(truncated) {
    if (!registry_) throw std::invalid_argument("FockState: null registry");
    for (const auto& [occupation, amplitude] : terms_) {
        if (!registry_->is_valid(occupation)) {
            throw std::invalid_argument("occupation " + format_occupation(occupation) +
                                        " is not valid for the registry");
        }
    }
}

FockState FockState::vacuum(RegistryPtr registry) {
    Occupation zero(registry->size(), 0);
    return basis(std::move(registry), std::move(zero));
}

FockState FockState::basis(RegistryPtr registry, Occupation occupation, Complex amplitude) {
    Terms terms;
    terms.emplace(std::move(occupation), amplitude);
    return FockState(std::move(registry), std::move(terms));
}

Complex FockState::amplitude(const Occupation& occupation) const {
    auto it = terms_.find(occupation);
    return it == terms_.end() ? Complex{} : it->second;
}

double FockState::norm2() const {
    double sum = 0.0;
    for (const auto& [occupation, amplitude] : terms_) sum += std::norm(amplitude);
    return sum;
}

FockState FockState::normalized() const {
    const double n2 = norm2();
    if (n2 == 0.0) throw std::domain_error("cannot normalize the zero state");
    return scaled(1.0 / std::sqrt(n2));
}

FockState FockState::pruned(double tolerance) const {
    Terms kept;
    for (const auto& [occupation, amplitude] : terms_) {
        if (std::abs(amplitude) >= tolerance) kept.emplace(occupation, amplitude);
    }
    return FockState(registry_, std::move(kept), truncated_);
}

FockState FockState::scaled(Complex factor) const {
    Terms out = terms_;
    for (auto& [occupation, amplitude] : out) amplitude *= factor;
    return FockState(registry_, std::move(out), truncated_);
}

FockState FockState::with_truncated(bool truncated) const {
    return FockState(registry_, terms_, truncated);
}

FockState operator+(const FockState& lhs, const FockState& rhs) {
    require_same_registry(lhs, rhs);
    FockState::Terms out = lhs.terms_;
    for (const auto& [occupation, amplitude] : rhs.terms_) out[occupation] += amplitude;
    return FockState(lhs.registry_, std::move(out), lhs.truncated_ || rhs.truncated_);
}

FockState operator-(const FockState& lhs, const FockState& rhs) {
    return lhs + rhs.scaled(-1.0);
}

FockState apply_creation(const FockState& state, std::size_t mode) {
    const ModeTerm term{mode, 1.0};
    return apply_creation(state, std::span<const ModeTerm>(&term, 1));
}

FockState apply_creation(const FockState& state, std::span<const ModeTerm> combination) {
    const auto& registry = state.registry();
    for (const auto& term : combination) require_mode(registry, term.mode);

    FockState::Terms out;
    bool truncated = state.truncated();
    for (const auto& [occupation, amplitude] : state.terms()) {
        if (total_photons(occupation) + 1 > registry.photon_cap()) {
            truncated = truncated || std::any_of(combination.begin(), combination.end(),
                                                 [](const ModeTerm& t) { return t.coefficient != 0.0; });
            continue;
        }
        for (const auto& term : combination) {
            if (term.coefficient == 0.0) continue;
            Occupation next = occupation;
            next[term.mode] += 1;
            out[next] += amplitude * term.coefficient * std::sqrt(static_cast<double>(next[term.mode]));
        }
    }
    return FockState(state.registry_ptr(), std::move(out), truncated);
}

FockState apply_annihilation(const FockState& state, std::size_t mode) {
    require_mode(state.registry(), mode);
    FockState::Terms out;
    for (const auto& [occupation, amplitude] : state.terms()) {
        const int n = occupation[mode];
        if (n == 0) continue;
        Occupation next = occupation;
        next[mode] -= 1;
        out[next] += amplitude * std::sqrt(static_cast<double>(n));
    }
    return FockState(state.registry_ptr(), std::move(out), state.truncated());
}

Complex inner_product(const FockState& lhs, const FockState& rhs) {
    require_same_registry(lhs, rhs);
    const auto& small = lhs.terms().size() <= rhs.terms().size() ? lhs.terms() : rhs.terms();
    const bool lhs_is_small = &small == &lhs.terms();
    Complex sum{};
    for (const auto& [occupation, amplitude] : small) {
        const Complex other = lhs_is_small ? rhs.amplitude(occupation) : lhs.amplitude(occupation);
        sum += lhs_is_small ? std::conj(amplitude) * other : std::conj(other) * amplitude;
    }
    return sum;
}

FockState project(const FockState& state, std::span<const PhotonConstraint> constraints) {
    const auto& registry = state.registry();
    std::vector<std::vector<std::size_t>> groups;
    std::set<std::string> seen;
    for (const auto& constraint : constraints) {
        if (!seen.insert(constraint.spatial).second) {
            throw std::invalid_argument("spatial mode '" + constraint.spatial +
                                        "' constrained twice");
        }
        groups.push_back(registry.spatial_modes(constraint.spatial));
    }
    FockState::Terms out;
    for (const auto& [occupation, amplitude] : state.terms()) {
        bool keep = true;
        for (std::size_t c = 0; c < constraints.size() && keep; ++c) {
            int count = 0;
            for (std::size_t mode : groups[c]) count += occupation[mode];
            keep = count == constraints[c].photons;
        }
        if (keep) out.emplace(occupation, amplitude);
    }
    return FockState(state.registry_ptr(), std::move(out), state.truncated());
}

FockState rehome(const FockState& state, RegistryPtr target) {
    if (state.registry().modes() != target->modes()) {
        throw std::invalid_argument("rehome: registries have different modes");
    }
    FockState::Terms out;
    bool truncated = state.truncated();
    for (const auto& [occupation, amplitude] : state.terms()) {
        if (total_photons(occupation) > target->photon_cap()) {
            truncated = true;
            continue;
        }
        out.emplace(occupation, amplitude);
    }
    return FockState(std::move(target), std::move(out), truncated);
}

double weight_above(const FockState& state, int photons) {
    double sum = 0.0;
    for (const auto& [occupation, amplitude] : state.terms()) {
        if (total_photons(occupation) > photons) sum += std::norm(amplitude);
    }
    return sum;
}

std::string format_occupation(const Occupation& occupation) {
    std::string out;
    for (std::size_t i = 0; i < occupation.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(occupation[i]);
    }
    return out;
}

Occupation parse_occupation(std::string_view text) {
    Occupation out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto field = text.substr(0, comma);
        int value = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc{} || ptr != field.data() + field.size() || value < 0) {
            throw std::invalid_argument("bad occupation field '" + std::string(field) + "'");
        }
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string to_text(const FockState& state) {
    std::string out;
    for (const auto& [occupation, amplitude] : state.terms()) {
        out += format_occupation(occupation);
        out += '\t';
        out += format_double(amplitude.real());
        out += '\t';
        out += format_double(amplitude.imag());
        out += '\n';
    }
    return out;
}

FockState from_text(std::string_view text, RegistryPtr registry) {
    FockState::Terms terms;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        auto line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        if (line.empty()) continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
        if (tab2 == std::string_view::npos) {
            throw std::invalid_argument("state text line " + std::to_string(line_no) +
                                        ": expected three tab-separated fields");
        }
        auto occupation = parse_occupation(line.substr(0, tab1));
        const double re = parse_double(line.substr(tab1 + 1, tab2 - tab1 - 1));
        const double im = parse_double(line.substr(tab2 + 1));
        terms[std::move(occupation)] += Complex{re, im};
    }
    return FockState(std::move(registry), std::move(terms));
}

}  // namespace qiopa
