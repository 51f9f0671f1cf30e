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

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qiopa/fock.hpp"

namespace qiopa {

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;

/// Density matrix on a small labelled subspace.
class DensityOperator {
  public:
    /// Throws std::invalid_argument unless the matrix is square, matches the
    /// label count and is Hermitian within kHermitianTolerance.
    DensityOperator(std::vector<std::string> labels, Eigen::MatrixXcd matrix);

    static DensityOperator pure(std::vector<std::string> labels, const Eigen::VectorXcd& vector);

    const std::vector<std::string>& labels() const { return labels_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    Eigen::Index dim() const { return matrix_.rows(); }

    Complex element(Eigen::Index row, Eigen::Index col) const { return matrix_(row, col); }
    double trace() const { return matrix_.trace().real(); }
    double purity() const;
    double min_eigenvalue() const;
    /// <v|rho|v>.
    double expectation(const Eigen::VectorXcd& vector) const;

    DensityOperator normalized() const;

    /// Matrix elements <e_i|rho|e_j> where the columns of `basis` are the
    /// e_i written in the current label basis.
    DensityOperator in_basis(std::vector<std::string> labels, const Eigen::MatrixXcd& basis) const;

    /// Throws std::domain_error if trace or positivity fail.
    void validate() const;

  private:
    std::vector<std::string> labels_;
    Eigen::MatrixXcd matrix_;
};

/// Partial trace of |state><state| over every mode not in `kept_modes`.
/// Labels are the kept-mode occupations present in the state, formatted by
/// format_occupation and sorted lexicographically by occupation.
DensityOperator reduced_density(const FockState& state, std::span<const std::size_t> kept_modes);

/// Amplitudes of a state whose modes outside `kept_modes` are all empty,
/// keyed by kept-mode occupation. Throws if any other mode is occupied.
std::map<Occupation, Complex> restrict_to_modes(const FockState& state, std::span<const std::size_t> kept_modes);

}  // namespace qiopa
