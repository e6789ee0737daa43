// Copyright 2026 The fockpovm Authors
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

// Debug and test-only checks that need a dense eigensolver. Kept out of the
// core headers so that only callers of these pull in Eigen.

#pragma once

#include <Eigen/Dense>

#include "fockpovm/fock_core.hpp"

namespace fockpovm {

inline Eigen::MatrixXcd to_eigen(const DensityMatrix &rho) {
    const auto dim = static_cast<Eigen::Index>(rho.dim());
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            m(n, k) = rho(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
        }
    }
    return m;
}

inline double min_eigenvalue(const DensityMatrix &rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(rho), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

/// Smallest eigenvalue >= -1e-10.
inline bool is_positive_semidefinite(const DensityMatrix &rho, double tolerance = 1e-10) {
    return min_eigenvalue(rho) >= -tolerance;
}

}  // namespace fockpovm
