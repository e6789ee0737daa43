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

#include "fockpovm/fock_core.hpp"

#include <cmath>
#include <complex>

#include "gtest/gtest.h"

#include "fockpovm/diagnostics.hpp"
#include "fockpovm/random_state.hpp"

using namespace fockpovm;

namespace {

ErrorKind kind_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an fockpovm::Error";
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(fock_core, default_dimension_rule) {
    // ceil(|a|^2 + 10 sqrt(|a|^2 + 1) + 20)
    ASSERT_EQ(default_dimension(0.0), 30u);
    ASSERT_EQ(default_dimension(1.0), 36u);
    ASSERT_EQ(default_dimension(3.0), 61u);
    ASSERT_EQ(default_dimension(10.0), 221u);
}

TEST(fock_core, truncation_config_validation) {
    ASSERT_EQ(kind_of([] { TruncationConfig(0); }), ErrorKind::InvalidArgument);
    ASSERT_EQ(kind_of([] { TruncationConfig(4, 1.0); }), ErrorKind::InvalidArgument);
    ASSERT_EQ(kind_of([] { TruncationConfig(4, -1e-3); }), ErrorKind::InvalidArgument);
}

TEST(fock_core, coherent_vacuum) {
    DensityMatrix rho = make_coherent_state(0.0, TruncationConfig(4));
    for (std::size_t n = 0; n < 4; ++n) {
        for (std::size_t m = 0; m < 4; ++m) {
            ASSERT_EQ(rho(n, m), Complex(n == 0 && m == 0 ? 1.0 : 0.0, 0.0));
        }
    }
}

TEST(fock_core, coherent_alpha3_moments) {
    DensityMatrix rho = make_coherent_state(3.0, TruncationConfig(40));
    ASSERT_NEAR(number_expectation(rho), 9.0, 1e-9);
    ASSERT_NEAR(std::abs(annihilation_expectation(rho) - 3.0), 0.0, 1e-9);
    ASSERT_NEAR(purity(rho), 1.0, 1e-9);
    ASSERT_NEAR(rho.trace(), 1.0, 1e-12);
    ASSERT_EQ(rho.hermiticity_defect(), 0.0);
}

TEST(fock_core, coherent_alpha1_vacuum_population) {
    // e^{-1}, evaluated directly.
    DensityMatrix rho = make_coherent_state(1.0, TruncationConfig(20));
    ASSERT_NEAR(rho(0, 0).real(), 0.36787944117144233, 1e-12);
}

TEST(fock_core, coherent_diagonal_is_poisson) {
    for (Complex alpha : {Complex(0.5, 0.0), Complex(2.0, -1.0), Complex(0.0, 4.0)}) {
        TruncationConfig cfg = TruncationConfig::for_amplitude(alpha);
        DensityMatrix rho = make_coherent_state(alpha, cfg);
        double mean = std::norm(alpha);
        for (std::size_t n = 0; n < rho.dim(); ++n) {
            double nn = static_cast<double>(n);
            double poisson = std::exp(-mean + nn * std::log(mean) - std::lgamma(nn + 1.0));
            ASSERT_NEAR(rho(n, n).real(), poisson, 1e-12 * std::max(1.0, poisson) + 1e-15) << n;
        }
        ASSERT_NEAR(std::abs(annihilation_expectation(rho) - alpha), 0.0, 10 * cfg.tail_tolerance);
        ASSERT_NEAR(number_expectation(rho), mean, 10 * cfg.tail_tolerance * std::max(1.0, mean));
    }
}

TEST(fock_core, coherent_large_amplitude_no_overflow) {
    // |alpha|^2 = 100 at the default dimension of 221, and a 200-dim vacuum.
    DensityMatrix rho = make_coherent_state(10.0);
    ASSERT_EQ(rho.dim(), 221u);
    ASSERT_NEAR(number_expectation(rho), 100.0, 1e-9);
    ASSERT_NEAR(annihilation_expectation(rho).real(), 10.0, 1e-9);
    for (const Complex &z : rho.elements()) {
        ASSERT_TRUE(is_finite(z));
    }
    DensityMatrix wide = make_coherent_state(Complex(6.0, 8.0), TruncationConfig(200));
    ASSERT_NEAR(purity(wide), 1.0, 1e-9);
}

TEST(fock_core, coherent_truncation_too_small) {
    try {
        make_coherent_state(3.0, TruncationConfig(10));
        FAIL() << "expected TruncationTooSmall";
    } catch (const Error &e) {
        ASSERT_EQ(e.kind(), ErrorKind::TruncationTooSmall);
        ASSERT_NE(std::string(e.what()).find("tail mass"), std::string::npos);
    }
}

TEST(fock_core, coherent_rejects_non_finite_alpha) {
    ASSERT_EQ(kind_of([] { make_coherent_state(Complex(NAN, 0.0), TruncationConfig(4)); }),
              ErrorKind::InvalidArgument);
}

TEST(fock_core, fock_states) {
    DensityMatrix v = make_fock_state(0, TruncationConfig(3));
    ASSERT_EQ(v(0, 0), Complex(1.0));
    ASSERT_EQ(v(1, 1), Complex(0.0));
    DensityMatrix two = make_fock_state(2, TruncationConfig(5));
    for (std::size_t n = 0; n < 5; ++n) {
        ASSERT_EQ(two(n, n).real(), n == 2 ? 1.0 : 0.0);
    }
    ASSERT_EQ(kind_of([] { make_fock_state(5, TruncationConfig(4)); }), ErrorKind::IndexOutOfRange);
}

TEST(fock_core, fock_state_expectations) {
    for (std::size_t n = 0; n < 8; ++n) {
        DensityMatrix rho = make_fock_state(n, TruncationConfig(8));
        ASSERT_EQ(annihilation_expectation(rho), Complex(0.0));
        ASSERT_EQ(number_expectation(rho), static_cast<double>(n));
        ASSERT_EQ(purity(rho), 1.0);
    }
}

TEST(fock_core, two_level_superposition_coherence) {
    DensityMatrix rho = DensityMatrix::from_elements(2, {0.5, 0.5, 0.5, 0.5});
    ASSERT_DOUBLE_EQ(annihilation_expectation(rho).real(), 0.5);
    ASSERT_DOUBLE_EQ(annihilation_expectation(rho).imag(), 0.0);
}

TEST(fock_core, purity_of_mixture) {
    DensityMatrix rho = DensityMatrix::from_elements(2, {0.5, 0.0, 0.0, 0.5});
    ASSERT_DOUBLE_EQ(purity(rho), 0.5);
}

TEST(fock_core, from_elements_validation) {
    ASSERT_EQ(kind_of([] { DensityMatrix::from_elements(2, {1.0, 0.0, 0.0}); }), ErrorKind::InvalidState);
    ASSERT_EQ(kind_of([] { DensityMatrix::from_elements(2, {0.6, 0.0, 0.0, 0.6}); }), ErrorKind::InvalidState);
    ASSERT_EQ(kind_of([] {
                  DensityMatrix::from_elements(2, {0.5, Complex(0.1, 0.2), Complex(0.1, 0.2), 0.5});
              }),
              ErrorKind::InvalidState);
    ASSERT_EQ(kind_of([] { DensityMatrix::from_elements(1, {Complex(NAN, 0.0)}); }), ErrorKind::InvalidState);
}

TEST(fock_core, from_elements_symmetrizes_within_tolerance) {
    DensityMatrix rho =
        DensityMatrix::from_elements(2, {Complex(0.5, 1e-14), Complex(0.1, 0.2), Complex(0.1 + 1e-14, -0.2), 0.5});
    ASSERT_EQ(rho.hermiticity_defect(), 0.0);
    ASSERT_EQ(rho(0, 0).imag(), 0.0);
}

TEST(fock_core, random_states_are_valid) {
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        DensityMatrix rho = random_density_matrix(12, rng, i % 3 == 0 ? 1 : 0);
        ASSERT_EQ(rho.hermiticity_defect(), 0.0);
        ASSERT_NEAR(rho.trace(), 1.0, 1e-12);
        ASSERT_TRUE(is_positive_semidefinite(rho));
        double p = purity(rho);
        ASSERT_GE(p, 1.0 / 12 - 1e-10);
        ASSERT_LE(p, 1.0 + 1e-10);
    }
}

TEST(fock_core, coherent_state_is_positive_semidefinite) {
    ASSERT_TRUE(is_positive_semidefinite(make_coherent_state(Complex(1.5, -2.0))));
}
