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

#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "fockpovm/fock_core.hpp"
#include "fockpovm/trajectory.hpp"

namespace fockpovm {

/// Random mixed state rho = G G^dagger / Tr(G G^dagger), with G a dim x rank
/// matrix of iid complex Gaussians (Ginibre ensemble). rank = 0 means full rank.
inline DensityMatrix random_density_matrix(std::size_t dim, Rng &rng, std::size_t rank = 0) {
    if (rank == 0 || rank > dim) {
        rank = dim;
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Complex> g(dim * rank);
    for (Complex &z : g) {
        double re = normal(rng);
        double im = normal(rng);
        z = Complex(re, im);
    }

    std::vector<Complex> rho(dim * dim);
    double trace = 0.0;
    for (std::size_t n = 0; n < dim; ++n) {
        for (std::size_t m = n; m < dim; ++m) {
            Complex sum = 0.0;
            for (std::size_t k = 0; k < rank; ++k) {
                sum += g[n * rank + k] * std::conj(g[m * rank + k]);
            }
            rho[n * dim + m] = sum;
        }
        trace += rho[n * dim + n].real();
    }
    for (std::size_t n = 0; n < dim; ++n) {
        rho[n * dim + n] = Complex(rho[n * dim + n].real() / trace, 0.0);
        for (std::size_t m = n + 1; m < dim; ++m) {
            Complex v = rho[n * dim + m] / trace;
            rho[n * dim + m] = v;
            rho[m * dim + n] = std::conj(v);
        }
    }
    return DensityMatrix::from_elements(dim, std::move(rho));
}

}  // namespace fockpovm
