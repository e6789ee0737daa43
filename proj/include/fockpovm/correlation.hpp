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

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "fockpovm/error.hpp"
#include "fockpovm/fock_core.hpp"
#include "fockpovm/measurement.hpp"
#include "fockpovm/parallel.hpp"

namespace fockpovm {

/// Q(nm) = cos(2 pi nm): +1 at integer outcomes, -1 at half-integers.
inline double quantization(double nm) {
    return std::cos(2.0 * std::numbers::pi * nm);
}

/// Outcome-averaged statistics at one resolution. Averages are taken with
/// weight P(nm) dnm over `grid`.
struct CorrelationReport {
    Resolution dn;
    double avg_q;
    ComplexAmplitude avg_a;
    ComplexAmplitude avg_qa;
    ComplexAmplitude c;
    OutcomeGrid grid;
    double normalization;
};

inline constexpr double kGridNormalizationTolerance = 1e-6;

/// Trapezoid estimate of C(Q, <a>_f) = E[Q <a>_f] - E[Q] E[<a>_f] for any state.
inline CorrelationReport correlation_numeric(const DensityMatrix &rho, Resolution dn,
                                             const OutcomeGrid &grid) {
    const std::size_t size = grid.size();
    std::vector<double> p(size);
    std::vector<double> qp(size);
    std::vector<Complex> ap(size);
    std::vector<Complex> qap(size);
    for (std::size_t i = 0; i < size; ++i) {
        const double nm = grid.point(i);
        MeasurementOperator op = make_measurement_operator(dn, nm, rho.dim());
        const double q = quantization(nm);
        p[i] = detail::sandwich_trace(rho, op.diag);
        ap[i] = detail::sandwich_coherence(rho, op.diag);
        qp[i] = q * p[i];
        qap[i] = q * ap[i];
    }

    const double z = trapezoid(grid, p);
    if (!(std::abs(z - 1.0) <= kGridNormalizationTolerance)) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "outcome density integrates to " << z << " on [" << grid.lo() << ", " << grid.hi()
            << "] with step " << grid.step();
        throw Error(ErrorKind::GridInsufficient, msg.str());
    }
    const double avg_q = trapezoid(grid, qp) / z;
    const Complex avg_a = trapezoid(grid, ap) / z;
    const Complex avg_qa = trapezoid(grid, qap) / z;
    return CorrelationReport{dn, avg_q, avg_a, avg_qa, avg_qa - avg_q * avg_a, grid, z};
}

namespace detail {

template <typename Eval>
std::vector<CorrelationReport> sweep_points(std::span<const Resolution> dn_values, std::size_t workers,
                                            Eval &&eval) {
    if (dn_values.empty()) {
        throw Error(ErrorKind::InvalidArgument, "resolution sweep needs at least one point");
    }
    std::vector<std::optional<CorrelationReport>> slots(dn_values.size());
    parallel_for(dn_values.size(), workers, [&](std::size_t i) {
        try {
            slots[i] = eval(dn_values[i]);
        } catch (const Error &e) {
            std::ostringstream msg;
            msg << "at dn = " << dn_values[i].value() << ": " << e.what();
            throw Error(e.kind(), msg.str());
        }
    });
    std::vector<CorrelationReport> out;
    out.reserve(slots.size());
    for (auto &s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

}  // namespace detail

/// One report per resolution, on each point's default grid. Order follows
/// `dn_values`; results do not depend on `workers`.
inline std::vector<CorrelationReport> resolution_sweep(const DensityMatrix &rho,
                                                       std::span<const Resolution> dn_values,
                                                       std::size_t workers = 1, double refinement = 1.0) {
    return detail::sweep_points(dn_values, workers, [&](Resolution dn) {
        return correlation_numeric(rho, dn, default_grid(rho, dn, refinement));
    });
}

/// Sweep on the coherent state |alpha>, truncated by the default rule.
inline std::vector<CorrelationReport> resolution_sweep(ComplexAmplitude alpha,
                                                       std::span<const Resolution> dn_values,
                                                       std::size_t workers = 1, double refinement = 1.0) {
    return resolution_sweep(make_coherent_state(alpha), dn_values, workers, refinement);
}

/// Diagonal of the parity operator (-1)^n, exact +-1 entries.
inline std::vector<double> parity_diagonal(std::size_t dim) {
    std::vector<double> parity(dim);
    for (std::size_t n = 0; n < dim; ++n) {
        parity[n] = (n % 2 == 0) ? 1.0 : -1.0;
    }
    return parity;
}

namespace detail {

/// Tr(Pi Pi rho) for a diagonal Pi.
inline double squared_parity_expectation(const DensityMatrix &rho, std::span<const double> parity) {
    double sum = 0.0;
    for (std::size_t n = 0; n < rho.dim(); ++n) {
        sum += parity[n] * parity[n] * rho(n, n).real();
    }
    return sum;
}

/// Tr(Pi a Pi rho) - Tr(Pi Pi rho) Tr(a rho) for a diagonal Pi.
inline ComplexAmplitude operator_correlation_with_parity(const DensityMatrix &rho,
                                                         std::span<const double> parity) {
    // (Pi a Pi)_{n, n+1} = Pi_n sqrt(n+1) Pi_{n+1}
    Complex sandwiched = 0.0;
    for (std::size_t n = 0; n + 1 < rho.dim(); ++n) {
        sandwiched += parity[n] * std::sqrt(static_cast<double>(n + 1)) * parity[n + 1] * rho(n + 1, n);
    }
    return sandwiched - squared_parity_expectation(rho, parity) * annihilation_expectation(rho);
}

}  // namespace detail

/// <(-1)^{2n}>, which is 1 for every state.
inline double quantization_operator_expectation(const DensityMatrix &rho) {
    return detail::squared_parity_expectation(rho, parity_diagonal(rho.dim()));
}

/// <(-1)^n a (-1)^n> - <(-1)^{2n}> <a>. Equals -2 <a> for every state.
inline ComplexAmplitude operator_correlation(const DensityMatrix &rho) {
    return detail::operator_correlation_with_parity(rho, parity_diagonal(rho.dim()));
}

}  // namespace fockpovm
