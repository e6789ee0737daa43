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

#include "fockpovm/analytics.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

#include "fockpovm/correlation.hpp"
#include "fockpovm/measurement.hpp"

using namespace fockpovm;

namespace {

// Naive linear-space evaluation with Poisson weights by recurrence. Fine for
// moderate |alpha| and outcomes near the support; used as an oracle only.
struct NaiveSeries {
    double alpha;
    double dn;
    int terms = 80;

    double density(double nm) const {
        double w = std::exp(-alpha * alpha);
        double sum = 0.0;
        for (int n = 0; n < terms; ++n) {
            sum += w * std::exp(-(n - nm) * (n - nm) / (2 * dn * dn));
            w *= alpha * alpha / (n + 1);
        }
        return sum / std::sqrt(2 * M_PI * dn * dn);
    }

    double post_coherence(double nm) const {
        double w = 1.0;
        double num = 0.0;
        double den = 0.0;
        for (int n = 0; n < terms; ++n) {
            num += w * std::exp(-(n + 0.5 - nm) * (n + 0.5 - nm) / (2 * dn * dn));
            den += w * std::exp(-(n - nm) * (n - nm) / (2 * dn * dn));
            w *= alpha * alpha / (n + 1);
        }
        return alpha * std::exp(-1 / (8 * dn * dn)) * num / den;
    }
};

}  // namespace

TEST(coherent_outcome_density, vacuum_single_gaussian) {
    ASSERT_NEAR(coherent_outcome_density(0.0, Resolution(0.3), 0.0), 1.32980760133810892646648686645, 1e-14);
}

TEST(coherent_outcome_density, alpha3_at_nine) {
    // mpmath direct summation.
    ASSERT_NEAR(coherent_outcome_density(3.0, Resolution(0.3), 9.0), 0.176496610056889600675419409763, 1e-13);
    // Dominant term alone.
    ASSERT_GT(coherent_outcome_density(3.0, Resolution(0.3), 9.0), 0.175209651603830727805800694721);
}

TEST(coherent_outcome_density, matches_naive_summation) {
    NaiveSeries naive{3.0, 0.3};
    for (double nm = -1.0; nm <= 25.0; nm += 0.137) {
        ASSERT_NEAR(coherent_outcome_density(3.0, Resolution(0.3), nm), naive.density(nm), 1e-13) << nm;
    }
}

TEST(coherent_outcome_density, depends_on_modulus_only) {
    const Resolution dn(0.45);
    for (double nm : {0.3, 2.0, 4.7}) {
        ASSERT_NEAR(coherent_outcome_density(std::polar(2.0, 1.1), dn, nm), coherent_outcome_density(2.0, dn, nm),
                    1e-14);
    }
}

TEST(coherent_outcome_density, poisson_envelope_at_integers) {
    // At dn = 0.3 neighbouring Gaussians barely overlap, so P(k) ~ Poisson(k; 9) / sqrt(2 pi dn^2).
    const Resolution dn(0.3);
    const double peak = 1.32980760133810892646648686645;
    for (int k = 3; k <= 16; ++k) {
        double poisson = std::exp(-9.0 + k * std::log(9.0) - std::lgamma(k + 1.0));
        ASSERT_NEAR(coherent_outcome_density(3.0, dn, k) / (peak * poisson), 1.0, 0.02) << k;
    }
}

TEST(coherent_outcome_density, agrees_with_operator_path) {
    const Resolution dn(0.3);
    DensityMatrix rho = make_coherent_state(3.0, TruncationConfig(40));
    ClosedFormSeries series(3.0, dn, 40);
    OutcomeGrid grid = default_grid(rho, dn);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double nm = grid.point(i);
        ASSERT_NEAR(series.density(nm), outcome_density(rho, dn, nm), 1e-9) << nm;
    }
}

TEST(coherent_post_coherence, frozen_values) {
    // mpmath, alpha = 3, dn = 0.3.
    const Resolution dn(0.3);
    ASSERT_NEAR(coherent_post_coherence(3.0, dn, 8.5).real(), 1.51093324311269059794737528227, 1e-12);
    ASSERT_NEAR(coherent_post_coherence(3.0, dn, 9.0).real(), 0.370343863349242781836727973327, 1e-12);
    ASSERT_NEAR(coherent_post_coherence(3.0, dn, 9.25).real(), 0.752443281147572980435892432285, 1e-12);
    ASSERT_NEAR(coherent_post_coherence(3.0, dn, 9.5).real(), 1.5905234057573978787009727385, 1e-12);
    ASSERT_LT(coherent_post_coherence(3.0, dn, 9.0).real() / coherent_post_coherence(3.0, dn, 9.25).real(), 1.0);
}

TEST(coherent_post_coherence, matches_naive_ratio) {
    NaiveSeries naive{1.7, 0.42};
    for (double nm = -0.5; nm <= 9.0; nm += 0.173) {
        ASSERT_NEAR(coherent_post_coherence(1.7, Resolution(0.42), nm).real(), naive.post_coherence(nm), 1e-12);
    }
}

TEST(coherent_post_coherence, phase_follows_alpha) {
    const Resolution dn(0.3);
    const Complex alpha = std::polar(3.0, 0.8);
    for (double nm : {8.5, 9.0, 9.3}) {
        Complex rotated = coherent_post_coherence(alpha, dn, nm);
        Complex real = coherent_post_coherence(3.0, dn, nm);
        ASSERT_NEAR(std::abs(rotated - real * std::polar(1.0, 0.8)), 0.0, 1e-13);
    }
}

TEST(coherent_post_coherence, broad_measurement_keeps_alpha) {
    // Near the centre of the distribution, dn = 100 leaves <a>_f within 1e-4 of alpha.
    for (double nm : {9.0, 9.25, 9.5}) {
        ASSERT_NEAR(coherent_post_coherence(3.0, Resolution(100.0), nm).real(), 3.0, 1e-4) << nm;
    }
    // mpmath: the slow drift ~ (nm - <n>) / (2 dn^2) remains far out in the tails.
    ASSERT_NEAR(coherent_post_coherence(3.0, Resolution(100.0), -800.0).real(), 2.88110027778423980610558462146,
                1e-9);
}

TEST(coherent_post_coherence, finite_far_from_support) {
    const Resolution dn(0.1);
    for (double nm : {-20.0, 80.0, 300.0}) {
        Complex a = coherent_post_coherence(3.0, dn, nm);
        ASSERT_TRUE(is_finite(a)) << nm;
    }
    ASSERT_EQ(coherent_post_coherence(0.0, dn, 0.0), Complex(0.0));
}

TEST(coherent_post_coherence, maxima_near_half_integers_minima_near_integers) {
    // The Poisson slope pulls each maximum off k + 1/2 by about
    // dn^2 ln((k + 1) / |alpha|^2): -0.053 at k = 4, +0.040 at k = 13.
    const Resolution dn(0.3);
    const ClosedFormSeries series(3.0, dn);
    const double h = 1e-3;
    std::vector<double> xs;
    std::vector<double> ys;
    for (double nm = 2.0; nm <= 11.0 + 1e-9; nm += h) {
        xs.push_back(nm);
        ys.push_back(std::abs(series.post_coherence(nm)));
    }
    int maxima = 0;
    int minima = 0;
    for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
        if (ys[i] > ys[i - 1] && ys[i] >= ys[i + 1]) {
            ++maxima;
            const double k = std::floor(xs[i] + 0.2);
            ASSERT_NEAR(xs[i], k + 0.5 + 0.09 * std::log((k + 1) / 9.0), 2e-3) << xs[i];
            if (k >= 7 && k <= 10) {
                ASSERT_NEAR(xs[i], k + 0.5, 0.02) << xs[i];
            }
        }
        if (ys[i] < ys[i - 1] && ys[i] <= ys[i + 1]) {
            ++minima;
            const double k = std::round(xs[i]);
            ASSERT_NEAR(xs[i], k, k >= 8 && k <= 10 ? 0.02 : 0.15) << xs[i];
        }
    }
    ASSERT_EQ(maxima, 9);
    ASSERT_EQ(minima, 8);
}

TEST(coherent_post_coherence, stays_bounded_above_truncation) {
    // Beyond the last kept level the post state sits on the top levels; |<a>| must stay O(sqrt(D)).
    for (double nm : {70.0, 120.0}) {
        ASSERT_LT(std::abs(coherent_post_coherence(3.0, Resolution(0.3), nm)), 8.0) << nm;
    }
}

TEST(closed_form_series, cdf_limits_and_derivative) {
    const ClosedFormSeries series(3.0, Resolution(0.3), 40);
    ASSERT_NEAR(series.cdf(-10.0), 0.0, 1e-15);
    ASSERT_NEAR(series.cdf(60.0), 1.0, 1e-12);
    for (double x : {4.2, 8.9, 9.5, 13.1}) {
        const double h = 1e-5;
        double fd = (series.cdf(x + h) - series.cdf(x - h)) / (2 * h);
        ASSERT_NEAR(fd, series.density(x), 1e-6) << x;
    }
}

TEST(averages, quantization) {
    ASSERT_NEAR(avg_quantization(Resolution(0.3)), 0.169224542482449953417602537446, 1e-15);
    ASSERT_NEAR(avg_quantization(Resolution(1e-6)), 1.0, 1e-10);
    ASSERT_NEAR(avg_quantization(Resolution(1.0)), 2.67528799107423968124112398905e-9, 1e-22);
}

TEST(averages, coherence) {
    ASSERT_NEAR(avg_coherence(3.0, Resolution(0.3)).real(), 0.748056626331888596454773053187, 1e-14);
    ASSERT_NEAR(avg_coherence(3.0, Resolution(0.1)).real(), 0.0000111799595162360129787745544279, 1e-19);
    ASSERT_NEAR(avg_coherence(3.0, Resolution(1e4)).real(), 3.0, 1e-8);
}

TEST(averages, product_is_exact_anticorrelation) {
    ASSERT_NEAR(avg_product(3.0, Resolution(0.3)).real(), -0.12658954034197887225763035471, 1e-14);
    ASSERT_EQ(avg_product(0.0, Resolution(0.3)), Complex(0.0));
    for (double d : {0.05, 0.2, 0.7, 2.0}) {
        Resolution dn(d);
        Complex alpha(1.3, -0.4);
        ASSERT_EQ(avg_product(alpha, dn), -avg_quantization(dn) * avg_coherence(alpha, dn));
    }
}

TEST(correlation_closed, values_and_identities) {
    ASSERT_NEAR(correlation_closed(3.0, Resolution(0.3)).real(), -0.25317908068395774451526070942, 1e-14);
    ASSERT_NEAR(-correlation_closed(1.0, Resolution(0.3)).real(), 0.0843930268946525815050869031401, 1e-15);
    for (double d : {0.1, 0.3, 0.9}) {
        Resolution dn(d);
        Complex alpha(-2.0, 0.5);
        Complex c = correlation_closed(alpha, dn);
        ASSERT_NEAR(std::abs(c - (avg_product(alpha, dn) - avg_quantization(dn) * avg_coherence(alpha, dn))), 0.0,
                    1e-16);
        ASSERT_NEAR(std::abs(c + 2.0 * avg_quantization(dn) * avg_coherence(alpha, dn)), 0.0, 1e-15);
    }
    ASSERT_LT(std::abs(correlation_closed(3.0, Resolution(0.02))), 1e-100);
    ASSERT_LT(std::abs(correlation_closed(3.0, Resolution(10.0))), 1e-100);
}

TEST(optimal_resolution, matches_fine_scan) {
    OptimalResolution opt = optimal_resolution();
    ASSERT_NEAR(opt.dn_star, 0.28209479177387814347403972578, 1e-15);
    ASSERT_NEAR(opt.peak_value_over_alpha, 0.0864278365275444995488354743435, 1e-15);

    double best_dn = 0.0;
    double best = -1.0;
    for (int i = 0; i <= 9500; ++i) {
        double d = 0.05 + 1e-4 * i;
        double v = -correlation_closed(1.0, Resolution(d)).real();
        if (v > best) {
            best = v;
            best_dn = d;
        }
    }
    ASSERT_NEAR(best_dn, opt.dn_star, 1e-4);
    ASSERT_NEAR(best, opt.peak_value_over_alpha, 1e-8);
    ASSERT_DOUBLE_EQ(std::round(opt.dn_star * 10) / 10, 0.3);
}

TEST(averages, weighted_quadrature_reproduces_closed_forms) {
    // Quadrature of Q, <a>_f and Q <a>_f against P(nm) dnm from the series alone.
    const Complex alpha = 3.0;
    for (double d : {0.1, 0.2, 0.3, 0.5, 1.0}) {
        const Resolution dn(d);
        const ClosedFormSeries series(alpha, dn);
        const OutcomeGrid grid = default_grid(series.terms(), dn);
        std::vector<double> p(grid.size()), qp(grid.size());
        std::vector<Complex> ap(grid.size()), qap(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double nm = grid.point(i);
            p[i] = series.density(nm);
            qp[i] = quantization(nm) * p[i];
            ap[i] = series.post_coherence(nm) * p[i];
            qap[i] = quantization(nm) * ap[i];
        }
        ASSERT_NEAR(trapezoid(grid, p), 1.0, 1e-9);
        const double q = trapezoid(grid, qp);
        const Complex a = trapezoid(grid, ap);
        const Complex qa = trapezoid(grid, qap);
        ASSERT_NEAR(q / avg_quantization(dn), 1.0, 1e-6) << d;
        ASSERT_NEAR(std::abs(a / avg_coherence(alpha, dn) - 1.0), 0.0, 1e-6) << d;
        ASSERT_NEAR(std::abs(qa / avg_product(alpha, dn) - 1.0), 0.0, 1e-6) << d;
    }
}
