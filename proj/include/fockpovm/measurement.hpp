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
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include "fockpovm/error.hpp"
#include "fockpovm/fock_core.hpp"

namespace fockpovm {

/// Width of the Gaussian pointer, in photon-number units. Always > 0.
class Resolution {
   public:
    explicit Resolution(double dn) : dn_(dn) {
        if (!(std::isfinite(dn) && dn > 0.0)) {
            std::ostringstream msg;
            msg << "resolution must be positive and finite, got " << dn;
            throw Error(ErrorKind::InvalidResolution, msg.str());
        }
    }

    double value() const noexcept {
        return dn_;
    }

    friend bool operator==(Resolution, Resolution) = default;

   private:
    double dn_;
};

/// Below this outcome density a selective update is refused.
inline constexpr double kDensityFloor = 1e-300;

/// Diagonal of the Gaussian measurement operator for outcome `nm`:
/// g_n = (2 pi dn^2)^{-1/4} exp(-(nm - n)^2 / (4 dn^2)).
struct MeasurementOperator {
    Resolution dn;
    double nm;
    std::vector<double> diag;
};

inline MeasurementOperator make_measurement_operator(Resolution dn, double nm, std::size_t dim) {
    if (dim < 1) {
        throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
    }
    if (!std::isfinite(nm)) {
        throw Error(ErrorKind::InvalidArgument, "outcome must be finite");
    }
    const double var = dn.value() * dn.value();
    const double norm = std::pow(2.0 * std::numbers::pi * var, -0.25);
    std::vector<double> diag(dim);
    for (std::size_t n = 0; n < dim; ++n) {
        double d = nm - static_cast<double>(n);
        diag[n] = norm * std::exp(-d * d / (4.0 * var));
    }
    return MeasurementOperator{dn, nm, std::move(diag)};
}

namespace detail {

/// Tr(G rho G) for diagonal G.
inline double sandwich_trace(const DensityMatrix &rho, std::span<const double> g) {
    double p = 0.0;
    for (std::size_t n = 0; n < rho.dim(); ++n) {
        p += g[n] * rho(n, n).real() * g[n];
    }
    return p;
}

/// Tr(a G rho G): the unnormalized post-measurement coherence, i.e. P * <a>_f.
inline Complex sandwich_coherence(const DensityMatrix &rho, std::span<const double> g) {
    Complex sum = 0.0;
    for (std::size_t n = 0; n + 1 < rho.dim(); ++n) {
        sum += std::sqrt(static_cast<double>(n + 1)) * (g[n + 1] * g[n]) * rho(n + 1, n);
    }
    return sum;
}

}  // namespace detail

/// P(nm) = Tr(G rho G), a density per unit nm. Only the diagonal of rho enters.
inline double outcome_density(const DensityMatrix &rho, Resolution dn, double nm) {
    MeasurementOperator op = make_measurement_operator(dn, nm, rho.dim());
    return detail::sandwich_trace(rho, op.diag);
}

struct MeasurementRecord {
    double nm;
    double density;
    DensityMatrix post_state;
    ComplexAmplitude post_coherence;
};

/// Selective update rho -> G rho G / P(nm).
inline MeasurementRecord apply_measurement(const DensityMatrix &rho, Resolution dn, double nm) {
    MeasurementOperator op = make_measurement_operator(dn, nm, rho.dim());
    const std::vector<double> &g = op.diag;
    const double p = detail::sandwich_trace(rho, g);
    if (!(p > kDensityFloor)) {
        std::ostringstream msg;
        msg << "outcome density " << p << " at n_m = " << nm << " is below the floor " << kDensityFloor;
        throw Error(ErrorKind::NegligibleOutcome, msg.str());
    }

    const std::size_t dim = rho.dim();
    std::vector<Complex> post(dim * dim);
    for (std::size_t n = 0; n < dim; ++n) {
        post[n * dim + n] = Complex(rho(n, n).real() * (g[n] * g[n]) / p, 0.0);
        for (std::size_t m = n + 1; m < dim; ++m) {
            Complex v = rho(n, m) * (g[n] * g[m]) / p;
            post[n * dim + m] = v;
            post[m * dim + n] = std::conj(v);
        }
    }
    DensityMatrix post_state(detail::trusted, dim, std::move(post));
    ComplexAmplitude coherence = annihilation_expectation(post_state);
    return MeasurementRecord{nm, p, std::move(post_state), coherence};
}

/// Outcome-averaged update: rho_nm -> rho_nm exp(-(n-m)^2 / (8 dn^2)).
/// This is the exact Gaussian integral of G rho G over all outcomes.
inline DensityMatrix nonselective_update(const DensityMatrix &rho, Resolution dn) {
    const std::size_t dim = rho.dim();
    const double var = dn.value() * dn.value();
    std::vector<double> damping(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        double kk = static_cast<double>(k);
        damping[k] = std::exp(-kk * kk / (8.0 * var));
    }
    std::vector<Complex> out(dim * dim);
    for (std::size_t n = 0; n < dim; ++n) {
        out[n * dim + n] = rho(n, n);
        for (std::size_t m = n + 1; m < dim; ++m) {
            Complex v = rho(n, m) * damping[m - n];
            out[n * dim + m] = v;
            out[m * dim + n] = std::conj(v);
        }
    }
    return DensityMatrix(detail::trusted, dim, std::move(out));
}

/// Uniform grid lo, lo + step, ..., hi over outcomes.
class OutcomeGrid {
   public:
    OutcomeGrid(double lo, double hi, double step) : lo_(lo), hi_(hi) {
        if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
            throw Error(ErrorKind::InvalidArgument, "grid requires finite lo < hi");
        }
        if (!(std::isfinite(step) && step > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "grid step must be positive");
        }
        double ratio = (hi - lo) / step;
        double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) > 1e-9 || rounded < 1.0) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "(hi - lo) / step = " << ratio << " is not an integer";
            throw Error(ErrorKind::InvalidArgument, msg.str());
        }
        intervals_ = static_cast<std::size_t>(rounded);
    }

    /// Grid over [lo, hi] with the largest step not exceeding `max_step` that
    /// divides the interval evenly.
    static OutcomeGrid covering(double lo, double hi, double max_step) {
        if (!(max_step > 0.0) || !(lo < hi)) {
            throw Error(ErrorKind::InvalidArgument, "grid requires lo < hi and a positive step");
        }
        double intervals = std::ceil((hi - lo) / max_step - 1e-9);
        intervals = std::max(intervals, 1.0);
        return OutcomeGrid(lo, hi, (hi - lo) / intervals);
    }

    double lo() const noexcept {
        return lo_;
    }
    double hi() const noexcept {
        return hi_;
    }
    double step() const noexcept {
        return (hi_ - lo_) / static_cast<double>(intervals_);
    }
    std::size_t size() const noexcept {
        return intervals_ + 1;
    }
    double point(std::size_t i) const noexcept {
        if (i == intervals_) {
            return hi_;
        }
        return lo_ + static_cast<double>(i) * step();
    }

    std::vector<double> points() const {
        std::vector<double> xs(size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            xs[i] = point(i);
        }
        return xs;
    }

    /// Composite trapezoid weights: step/2 at the ends, step elsewhere.
    double weight(std::size_t i) const noexcept {
        return (i == 0 || i == intervals_) ? 0.5 * step() : step();
    }

   private:
    double lo_;
    double hi_;
    std::size_t intervals_ = 1;
};

/// Composite trapezoid rule of sampled values on `grid`.
template <typename T>
T trapezoid(const OutcomeGrid &grid, const std::vector<T> &values) {
    T sum{};
    for (std::size_t i = 0; i < values.size(); ++i) {
        sum += grid.weight(i) * values[i];
    }
    return sum;
}

/// Covers the occupied number range plus 8 dn on each side, with
/// step <= min(dn / (30 refinement), 0.05).
inline OutcomeGrid default_grid(std::size_t dim, Resolution dn, double refinement = 1.0) {
    if (!(refinement >= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "grid refinement must be >= 1");
    }
    double lo = -8.0 * dn.value();
    double hi = static_cast<double>(dim - 1) + 8.0 * dn.value();
    double step = std::min(dn.value() / (30.0 * refinement), 0.05);
    return OutcomeGrid::covering(lo, hi, step);
}

inline OutcomeGrid default_grid(const DensityMatrix &rho, Resolution dn, double refinement = 1.0) {
    return default_grid(rho.dim(), dn, refinement);
}

}  // namespace fockpovm
