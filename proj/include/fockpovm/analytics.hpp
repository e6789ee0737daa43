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

// Closed-form statistics of a finite-resolution number measurement on a
// coherent state. Everything here is a sum of Gaussians centred on integer
// (or half-integer) photon numbers with Poisson weights, evaluated in log
// space so that neither n! nor exp(-(n - nm)^2 / 2 dn^2) can under- or
// overflow before the final ratio is taken.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "fockpovm/error.hpp"
#include "fockpovm/fock_core.hpp"
#include "fockpovm/measurement.hpp"

namespace fockpovm {

namespace detail {

/// log(sum_i exp(x_i)); -inf for an empty or all -inf input.
inline double log_sum_exp(const std::vector<double> &xs) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
        peak = std::max(peak, x);
    }
    if (!std::isfinite(peak)) {
        return peak;
    }
    double sum = 0.0;
    for (double x : xs) {
        sum += std::exp(x - peak);
    }
    return peak + std::log(sum);
}

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

}  // namespace detail

/// Truncated Poisson-weighted Gaussian series for a coherent state.
///
/// `terms` is the number of photon-number components kept; it defaults to the
/// same truncation rule as the state constructors so that the operator path
/// and the closed form see identical tails.
class ClosedFormSeries {
   public:
    ClosedFormSeries(ComplexAmplitude alpha, Resolution dn)
        : ClosedFormSeries(alpha, dn, default_dimension(alpha)) {
    }

    ClosedFormSeries(ComplexAmplitude alpha, Resolution dn, std::size_t terms)
        : alpha_(alpha), dn_(dn), log_weights_(terms) {
        if (!is_finite(alpha)) {
            throw Error(ErrorKind::InvalidArgument, "alpha must be finite");
        }
        if (terms < 1) {
            throw Error(ErrorKind::InvalidArgument, "series needs at least one term");
        }
        const double mean = std::norm(alpha);
        for (std::size_t n = 0; n < terms; ++n) {
            double nn = static_cast<double>(n);
            if (mean == 0.0) {
                log_weights_[n] = n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
            } else {
                log_weights_[n] = -mean + nn * std::log(mean) - std::lgamma(nn + 1.0);
            }
        }
    }

    ComplexAmplitude alpha() const noexcept {
        return alpha_;
    }
    Resolution resolution() const noexcept {
        return dn_;
    }
    std::size_t terms() const noexcept {
        return log_weights_.size();
    }

    /// P(nm) = e^{-|a|^2} / sqrt(2 pi dn^2) sum_n |a|^{2n}/n! exp(-(n - nm)^2 / (2 dn^2)).
    double density(double nm) const {
        const double var = dn_.value() * dn_.value();
        double log_sum = log_gaussian_sum(nm, 0.0);
        return std::exp(log_sum - 0.5 * std::log(2.0 * std::numbers::pi * var));
    }

    /// <a>_f(nm) = a e^{-1/(8 dn^2)} (sum over half-integer centres) / (sum over integer centres).
    ComplexAmplitude post_coherence(double nm) const {
        if (alpha_ == ComplexAmplitude(0.0, 0.0)) {
            return 0.0;
        }
        const double var = dn_.value() * dn_.value();
        const double log_den = log_gaussian_sum(nm, 0.0);
        if (!std::isfinite(log_den)) {
            throw Error(ErrorKind::NegligibleOutcome, "outcome density underflows at this n_m");
        }
        double log_ratio = log_gaussian_sum(nm, 0.5) - log_den;
        return alpha_ * std::exp(log_ratio - 1.0 / (8.0 * var));
    }

    /// Cumulative distribution of the outcome: sum_n p_n Phi((nm - n) / dn).
    double cdf(double nm) const {
        double sum = 0.0;
        for (std::size_t n = 0; n < log_weights_.size(); ++n) {
            if (!std::isfinite(log_weights_[n])) {
                continue;
            }
            double z = (nm - static_cast<double>(n)) / dn_.value();
            sum += std::exp(log_weights_[n]) * detail::normal_cdf(z);
        }
        return sum;
    }

   private:
    /// log sum_n w_n exp(-(n + shift - nm)^2 / (2 dn^2)), with w_n the Poisson weights.
    /// A half-integer centre pairs n with n + 1, so the last term is dropped
    /// there: the pair (D-1, D) is outside the truncated space.
    double log_gaussian_sum(double nm, double shift) const {
        const double var = dn_.value() * dn_.value();
        std::vector<double> logs(log_weights_.size() - (shift != 0.0 ? 1 : 0));
        for (std::size_t n = 0; n < logs.size(); ++n) {
            double d = static_cast<double>(n) + shift - nm;
            logs[n] = log_weights_[n] - d * d / (2.0 * var);
        }
        return detail::log_sum_exp(logs);
    }

    ComplexAmplitude alpha_;
    Resolution dn_;
    std::vector<double> log_weights_;
};

inline double coherent_outcome_density(ComplexAmplitude alpha, Resolution dn, double nm) {
    return ClosedFormSeries(alpha, dn).density(nm);
}

inline ComplexAmplitude coherent_post_coherence(ComplexAmplitude alpha, Resolution dn, double nm) {
    return ClosedFormSeries(alpha, dn).post_coherence(nm);
}

/// Outcome average of cos(2 pi nm): exp(-2 pi^2 dn^2).
inline double avg_quantization(Resolution dn) {
    const double pi = std::numbers::pi;
    return std::exp(-2.0 * pi * pi * dn.value() * dn.value());
}

/// Outcome average of <a>_f: alpha exp(-1/(8 dn^2)).
inline ComplexAmplitude avg_coherence(ComplexAmplitude alpha, Resolution dn) {
    return alpha * std::exp(-1.0 / (8.0 * dn.value() * dn.value()));
}

/// Outcome average of cos(2 pi nm) <a>_f.
inline ComplexAmplitude avg_product(ComplexAmplitude alpha, Resolution dn) {
    return -avg_quantization(dn) * avg_coherence(alpha, dn);
}

/// C(Q, <a>_f) = avg_product - avg_quantization * avg_coherence
///            = -2 exp(-2 pi^2 dn^2) exp(-1/(8 dn^2)) alpha.
inline ComplexAmplitude correlation_closed(ComplexAmplitude alpha, Resolution dn) {
    return avg_product(alpha, dn) - avg_quantization(dn) * avg_coherence(alpha, dn);
}

struct OptimalResolution {
    double dn_star;
    double peak_value_over_alpha;
};

/// Maximiser of -C/alpha = 2 exp(-2 pi^2 dn^2 - 1/(8 dn^2)).
///
/// The exponent is stationary where 4 pi^2 dn = 1/(4 dn^3), i.e.
/// dn^4 = 1/(16 pi^2), so dn* = (4 pi)^{-1/2} and the peak is 2 e^{-pi}.
inline OptimalResolution optimal_resolution() {
    const double pi = std::numbers::pi;
    const double dn_star = 1.0 / std::sqrt(4.0 * pi);
    return OptimalResolution{dn_star, 2.0 * std::exp(-pi)};
}

}  // namespace fockpovm
