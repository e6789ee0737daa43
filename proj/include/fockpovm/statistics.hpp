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
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "fockpovm/error.hpp"

namespace fockpovm {

/// sup |F_empirical - F| for samples already sorted ascending.
template <typename Cdf>
double ks_distance(std::span<const double> sorted, Cdf &&cdf) {
    const double count = static_cast<double>(sorted.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        worst = std::max(worst, std::abs(static_cast<double>(i + 1) / count - f));
        worst = std::max(worst, std::abs(f - static_cast<double>(i) / count));
    }
    return worst;
}

inline double median(std::vector<double> values) {
    if (values.empty()) {
        throw Error(ErrorKind::InvalidArgument, "median of an empty sample");
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

struct ChiSquareBin {
    std::size_t first;  // inclusive category range
    std::size_t last;
    double observed;
    double expected;
};

struct ChiSquareResult {
    double statistic;
    std::size_t dof;
    double p_value;
    double critical_value;  // at `significance`
    double significance;
    bool passed;
    std::vector<ChiSquareBin> bins;
};

/// Pearson goodness-of-fit of `counts` against category probabilities
/// `probs`. Adjacent categories are merged (from the top, then the bottom)
/// until every bin expects at least `min_expected` counts.
inline ChiSquareResult chi_square_test(std::span<const double> counts, std::span<const double> probs,
                                       double significance = 0.01, double min_expected = 5.0) {
    if (counts.size() != probs.size() || counts.empty()) {
        throw Error(ErrorKind::InvalidArgument, "counts and probabilities must have equal nonzero length");
    }
    double total = 0.0;
    for (double c : counts) {
        total += c;
    }
    double prob_sum = 0.0;
    for (double p : probs) {
        prob_sum += p;
    }

    std::vector<ChiSquareBin> bins;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        bins.push_back(ChiSquareBin{k, k, counts[k], total * probs[k] / prob_sum});
    }
    auto merge = [&](std::size_t i) {  // merge bins[i + 1] into bins[i]
        bins[i].last = bins[i + 1].last;
        bins[i].observed += bins[i + 1].observed;
        bins[i].expected += bins[i + 1].expected;
        bins.erase(bins.begin() + static_cast<std::ptrdiff_t>(i + 1));
    };
    while (bins.size() > 1 && bins.back().expected < min_expected) {
        merge(bins.size() - 2);
    }
    while (bins.size() > 1 && bins.front().expected < min_expected) {
        merge(0);
    }
    if (bins.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "too few populated bins for a chi-square test");
    }

    double stat = 0.0;
    for (const ChiSquareBin &b : bins) {
        double d = b.observed - b.expected;
        stat += d * d / b.expected;
    }
    const std::size_t dof = bins.size() - 1;
    boost::math::chi_squared dist(static_cast<double>(dof));
    const double p_value = boost::math::cdf(boost::math::complement(dist, stat));
    const double critical = boost::math::quantile(boost::math::complement(dist, significance));
    return ChiSquareResult{stat, dof, p_value, critical, significance, stat <= critical, std::move(bins)};
}

}  // namespace fockpovm
