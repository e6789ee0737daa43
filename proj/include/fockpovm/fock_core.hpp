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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "fockpovm/error.hpp"

namespace fockpovm {

using Complex = std::complex<double>;

/// Complex field amplitude (the coherent-state label and the value of <a>).
using ComplexAmplitude = std::complex<double>;

inline bool is_finite(ComplexAmplitude z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;

/// Smallest dimension whose Poisson tail stays below 1e-12 for |alpha|^2 <= 100.
inline std::size_t default_dimension(ComplexAmplitude alpha) {
    double mean = std::norm(alpha);
    return static_cast<std::size_t>(std::ceil(mean + 10.0 * std::sqrt(mean + 1.0) + 20.0));
}

struct TruncationConfig {
    std::size_t dim = 1;
    double tail_tolerance = 1e-12;

    TruncationConfig() = default;
    TruncationConfig(std::size_t dim_, double tail_tolerance_ = 1e-12)
        : dim(dim_), tail_tolerance(tail_tolerance_) {
        if (dim < 1) {
            throw Error(ErrorKind::InvalidArgument, "truncation dimension must be >= 1");
        }
        if (!(tail_tolerance >= 0.0 && tail_tolerance < 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "tail tolerance must lie in [0, 1)");
        }
    }

    static TruncationConfig for_amplitude(ComplexAmplitude alpha, double tail_tolerance = 1e-12) {
        return TruncationConfig(default_dimension(alpha), tail_tolerance);
    }
};

namespace detail {
struct Trusted {};
inline constexpr Trusted trusted{};
}  // namespace detail

/// Truncated density matrix in the photon-number basis, stored dense and
/// row-major: element (n, m) is rho_nm = <n|rho|m>.
///
/// Always Hermitian with unit trace. Instances are immutable.
class DensityMatrix {
   public:
    /// Validates and adopts `elements` (row-major, dim*dim). Hermiticity and
    /// unit trace are checked to 1e-12; the stored matrix is then made exactly
    /// Hermitian.
    static DensityMatrix from_elements(std::size_t dim, std::vector<Complex> elements) {
        if (dim < 1) {
            throw Error(ErrorKind::InvalidState, "dimension must be >= 1");
        }
        if (elements.size() != dim * dim) {
            throw Error(ErrorKind::InvalidState, "expected dim*dim elements");
        }
        for (const Complex &z : elements) {
            if (!is_finite(z)) {
                throw Error(ErrorKind::InvalidState, "non-finite matrix element");
            }
        }
        for (std::size_t n = 0; n < dim; ++n) {
            for (std::size_t m = n; m < dim; ++m) {
                Complex upper = elements[n * dim + m];
                Complex lower = elements[m * dim + n];
                if (std::abs(upper - std::conj(lower)) > kHermitianTolerance) {
                    std::ostringstream msg;
                    msg << "matrix is not Hermitian at (" << n << ", " << m << ")";
                    throw Error(ErrorKind::InvalidState, msg.str());
                }
                Complex sym = 0.5 * (upper + std::conj(lower));
                if (n == m) {
                    sym = Complex(sym.real(), 0.0);
                }
                elements[n * dim + m] = sym;
                elements[m * dim + n] = std::conj(sym);
            }
        }
        DensityMatrix rho(detail::trusted, dim, std::move(elements));
        double tr = rho.trace();
        if (std::abs(tr - 1.0) > kTraceTolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "trace is " << tr << ", expected 1";
            throw Error(ErrorKind::InvalidState, msg.str());
        }
        return rho;
    }

    /// Adopts elements produced by an operation that preserves the invariants
    /// by construction. No checks.
    DensityMatrix(detail::Trusted, std::size_t dim, std::vector<Complex> elements)
        : dim_(dim), elements_(std::move(elements)) {
    }

    std::size_t dim() const noexcept {
        return dim_;
    }

    Complex operator()(std::size_t n, std::size_t m) const {
        return elements_[n * dim_ + m];
    }

    std::span<const Complex> elements() const noexcept {
        return elements_;
    }

    /// Populations rho_nn.
    std::vector<double> diagonal() const {
        std::vector<double> d(dim_);
        for (std::size_t n = 0; n < dim_; ++n) {
            d[n] = elements_[n * dim_ + n].real();
        }
        return d;
    }

    double trace() const {
        double tr = 0.0;
        for (std::size_t n = 0; n < dim_; ++n) {
            tr += elements_[n * dim_ + n].real();
        }
        return tr;
    }

    /// max |rho_nm - conj(rho_mn)|; zero for anything built by this library.
    double hermiticity_defect() const {
        double worst = 0.0;
        for (std::size_t n = 0; n < dim_; ++n) {
            for (std::size_t m = 0; m < dim_; ++m) {
                worst = std::max(worst, std::abs((*this)(n, m) - std::conj((*this)(m, n))));
            }
        }
        return worst;
    }

   private:
    std::size_t dim_;
    std::vector<Complex> elements_;
};

/// Poisson mass sum_{n >= dim} e^{-|alpha|^2} |alpha|^{2n} / n!, summed
/// directly (no 1 - head cancellation).
inline double coherent_tail_mass(ComplexAmplitude alpha, std::size_t dim) {
    double mean = std::norm(alpha);
    if (mean == 0.0) {
        return 0.0;
    }
    // log p_n = -mean + n log(mean) - lgamma(n + 1)
    double log_mean = std::log(mean);
    double tail = 0.0;
    for (std::size_t n = dim;; ++n) {
        double nn = static_cast<double>(n);
        double p = std::exp(-mean + nn * log_mean - std::lgamma(nn + 1.0));
        tail += p;
        if (nn > mean && p <= tail * 1e-17) {
            break;
        }
        if (n > dim + 100000) {
            break;
        }
    }
    return tail;
}

/// Throws TruncationTooSmall when |alpha> loses more than the configured
/// Poisson mass beyond `cfg.dim`.
inline void check_coherent_truncation(ComplexAmplitude alpha, const TruncationConfig &cfg) {
    double tail = coherent_tail_mass(alpha, cfg.dim);
    if (tail > cfg.tail_tolerance) {
        std::ostringstream msg;
        msg.precision(3);
        msg << "Poisson tail mass " << tail << " beyond dim " << cfg.dim << " exceeds tolerance "
            << cfg.tail_tolerance;
        throw Error(ErrorKind::TruncationTooSmall, msg.str());
    }
}

/// Coherent state |alpha><alpha| truncated to cfg.dim and renormalized.
///
/// Amplitudes follow c_0 = e^{-|alpha|^2/2}, c_{n+1} = c_n alpha / sqrt(n+1),
/// so no factorial is ever formed.
inline DensityMatrix make_coherent_state(ComplexAmplitude alpha, const TruncationConfig &cfg) {
    if (!is_finite(alpha)) {
        throw Error(ErrorKind::InvalidArgument, "alpha must be finite");
    }
    check_coherent_truncation(alpha, cfg);

    const std::size_t dim = cfg.dim;
    std::vector<Complex> c(dim);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 0; n + 1 < dim; ++n) {
        c[n + 1] = c[n] * alpha / std::sqrt(static_cast<double>(n + 1));
    }
    double norm2 = 0.0;
    for (const Complex &z : c) {
        norm2 += std::norm(z);
    }
    double scale = 1.0 / std::sqrt(norm2);
    for (Complex &z : c) {
        z *= scale;
    }

    std::vector<Complex> rho(dim * dim);
    for (std::size_t n = 0; n < dim; ++n) {
        rho[n * dim + n] = Complex(std::norm(c[n]), 0.0);
        for (std::size_t m = n + 1; m < dim; ++m) {
            Complex v = c[n] * std::conj(c[m]);
            rho[n * dim + m] = v;
            rho[m * dim + n] = std::conj(v);
        }
    }
    return DensityMatrix(detail::trusted, dim, std::move(rho));
}

inline DensityMatrix make_coherent_state(ComplexAmplitude alpha) {
    return make_coherent_state(alpha, TruncationConfig::for_amplitude(alpha));
}

/// Number state |n><n|.
inline DensityMatrix make_fock_state(std::size_t n, const TruncationConfig &cfg) {
    if (n >= cfg.dim) {
        std::ostringstream msg;
        msg << "Fock index " << n << " is outside dimension " << cfg.dim;
        throw Error(ErrorKind::IndexOutOfRange, msg.str());
    }
    std::vector<Complex> rho(cfg.dim * cfg.dim, Complex(0.0, 0.0));
    rho[n * cfg.dim + n] = 1.0;
    return DensityMatrix(detail::trusted, cfg.dim, std::move(rho));
}

/// Tr(a rho) = sum_n sqrt(n+1) rho_{n+1,n}.
inline ComplexAmplitude annihilation_expectation(const DensityMatrix &rho) {
    Complex sum = 0.0;
    for (std::size_t n = 0; n + 1 < rho.dim(); ++n) {
        sum += std::sqrt(static_cast<double>(n + 1)) * rho(n + 1, n);
    }
    return sum;
}

inline double number_expectation(const DensityMatrix &rho) {
    double sum = 0.0;
    for (std::size_t n = 1; n < rho.dim(); ++n) {
        sum += static_cast<double>(n) * rho(n, n).real();
    }
    return sum;
}

/// Tr(rho^2) = sum_nm |rho_nm|^2 for Hermitian rho.
inline double purity(const DensityMatrix &rho) {
    double sum = 0.0;
    for (const Complex &z : rho.elements()) {
        sum += std::norm(z);
    }
    return sum;
}

}  // namespace fockpovm
