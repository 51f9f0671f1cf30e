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

#include "qiopa/density.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qiopa {

DensityOperator::DensityOperator(std::vector<std::string> labels, Eigen::MatrixXcd matrix)
    : labels_(std::move(labels)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw std::invalid_argument("density matrix must be square");
    }
    if (static_cast<Eigen::Index>(labels_.size()) != matrix_.rows()) {
        throw std::invalid_argument("density matrix size does not match label count");
    }
    if (matrix_.size() > 0 && (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
}

DensityOperator DensityOperator::pure(std::vector<std::string> labels, const Eigen::VectorXcd& vector) {
    Eigen::MatrixXcd rho = vector * vector.adjoint();
    return DensityOperator(std::move(labels), std::move(rho));
}

double DensityOperator::purity() const {
    return (matrix_ * matrix_).trace().real();
}

double DensityOperator::min_eigenvalue() const {
    if (matrix_.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double DensityOperator::expectation(const Eigen::VectorXcd& vector) const {
    if (vector.size() != matrix_.rows()) {
        throw std::invalid_argument("expectation: vector dimension mismatch");
    }
    return (vector.adjoint() * matrix_ * vector)(0, 0).real();
}

DensityOperator DensityOperator::normalized() const {
    const double t = trace();
    if (!(t > 0.0)) throw std::domain_error("cannot normalize a density operator with zero trace");
    Eigen::MatrixXcd scaled = matrix_ / t;
    return DensityOperator(labels_, std::move(scaled));
}

DensityOperator DensityOperator::in_basis(std::vector<std::string> labels,
                                          const Eigen::MatrixXcd& basis) const {
    if (basis.rows() != matrix_.rows()) {
        throw std::invalid_argument("in_basis: basis vectors have the wrong dimension");
    }
    Eigen::MatrixXcd transformed = basis.adjoint() * matrix_ * basis;
    // Round-off from the sandwich product can break exact Hermiticity.
    transformed = 0.5 * (transformed + transformed.adjoint()).eval();
    return DensityOperator(std::move(labels), std::move(transformed));
}

void DensityOperator::validate() const {
    if (std::abs(trace() - 1.0) > kTraceTolerance) {
        throw std::domain_error("density operator trace is not 1");
    }
    if (min_eigenvalue() < kEigenvalueFloor) {
        throw std::domain_error("density operator has a negative eigenvalue");
    }
}

namespace {

Occupation pick(const Occupation& occupation, std::span<const std::size_t> modes) {
    Occupation out;
    out.reserve(modes.size());
    for (std::size_t mode : modes) out.push_back(occupation[mode]);
    return out;
}

Occupation pick_complement(const Occupation& occupation, const std::vector<bool>& kept) {
    Occupation out;
    for (std::size_t i = 0; i < occupation.size(); ++i) {
        if (!kept[i]) out.push_back(occupation[i]);
    }
    return out;
}

std::vector<bool> kept_mask(const ModeRegistry& registry, std::span<const std::size_t> kept_modes) {
    if (kept_modes.empty()) throw std::invalid_argument("kept mode set is empty");
    std::vector<bool> mask(registry.size(), false);
    for (std::size_t mode : kept_modes) {
        if (mode >= registry.size()) throw std::invalid_argument("kept mode is not registered");
        if (mask[mode]) throw std::invalid_argument("kept mode listed twice");
        mask[mode] = true;
    }
    return mask;
}

}  // namespace

DensityOperator reduced_density(const FockState& state, std::span<const std::size_t> kept_modes) {
    const auto mask = kept_mask(state.registry(), kept_modes);
    if (state.is_zero()) throw std::domain_error("reduced_density of the zero state");

    // environment occupation -> (kept occupation -> amplitude)
    std::map<Occupation, std::map<Occupation, Complex>> by_environment;
    std::map<Occupation, Eigen::Index> index;
    for (const auto& [occupation, amplitude] : state.terms()) {
        auto kept = pick(occupation, kept_modes);
        index.emplace(kept, 0);
        by_environment[pick_complement(occupation, mask)][std::move(kept)] += amplitude;
    }
    std::vector<std::string> labels;
    Eigen::Index next = 0;
    for (auto& [kept, slot] : index) {
        slot = next++;
        labels.push_back(format_occupation(kept));
    }

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(next, next);
    for (const auto& [environment, column] : by_environment) {
        for (const auto& [row_occ, row_amp] : column) {
            for (const auto& [col_occ, col_amp] : column) {
                rho(index[row_occ], index[col_occ]) += row_amp * std::conj(col_amp);
            }
        }
    }
    rho /= state.norm2();
    DensityOperator out(std::move(labels), std::move(rho));
    out.validate();
    return out;
}

std::map<Occupation, Complex> restrict_to_modes(const FockState& state,
                                                std::span<const std::size_t> kept_modes) {
    const auto mask = kept_mask(state.registry(), kept_modes);
    std::map<Occupation, Complex> out;
    for (const auto& [occupation, amplitude] : state.terms()) {
        for (std::size_t i = 0; i < occupation.size(); ++i) {
            if (!mask[i] && occupation[i] != 0) {
                throw std::invalid_argument("restrict_to_modes: a dropped mode is occupied");
            }
        }
        out[pick(occupation, kept_modes)] += amplitude;
    }
    return out;
}

}  // namespace qiopa
