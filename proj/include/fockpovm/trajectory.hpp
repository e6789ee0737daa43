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

// Repeated finite-resolution number measurements on a single system.
//
// Random numbers come from std::mt19937_64 (64-bit Mersenne Twister,
// MT19937-64). A run is reproducible given its seed; shot i of an ensemble is
// seeded with seed ^ mix64(i * 0x9E3779B97F4A7C15), where mix64 is the
// SplitMix64 output finalizer. mix64(0) = 0, so shot 0 reuses the base seed.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "fockpovm/error.hpp"
#include "fockpovm/fock_core.hpp"
#include "fockpovm/measurement.hpp"
#include "fockpovm/parallel.hpp"

namespace fockpovm {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t shot_seed(std::uint64_t base_seed, std::uint64_t shot) {
    return base_seed ^ mix64(shot * 0x9E3779B97F4A7C15ULL);
}

/// Draws nm from P(nm) = sum_n rho_nn N(nm; n, dn^2): pick n with probability
/// rho_nn, then add Gaussian pointer noise.
inline double sample_outcome(const DensityMatrix &rho, Resolution dn, Rng &rng) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double u = uniform(rng) * rho.trace();
    double cumulative = 0.0;
    std::size_t chosen = 0;
    for (std::size_t n = 0; n < rho.dim(); ++n) {
        double p = rho(n, n).real();
        if (p <= 0.0) {
            continue;
        }
        chosen = n;
        cumulative += p;
        if (u < cumulative) {
            break;
        }
    }
    std::normal_distribution<double> noise(static_cast<double>(chosen), dn.value());
    return noise(rng);
}

struct TrajectoryConfig {
    Resolution dn;
    std::size_t steps;
    std::uint64_t seed;
    bool record_states = false;

    TrajectoryConfig(Resolution dn_, std::size_t steps_, std::uint64_t seed_, bool record_states_ = false)
        : dn(dn_), steps(steps_), seed(seed_), record_states(record_states_) {
        if (steps < 1) {
            throw Error(ErrorKind::InvalidArgument, "trajectory needs at least one step");
        }
    }
};

struct TrajectoryStep {
    std::size_t index;  // 1-based
    double nm;
    double post_number;
    ComplexAmplitude post_coherence;
    double post_purity;
    std::optional<DensityMatrix> post_state;
};

/// One stochastic run: sample an outcome, update selectively, repeat.
inline std::vector<TrajectoryStep> run_trajectory(const DensityMatrix &rho0, const TrajectoryConfig &cfg) {
    Rng rng(cfg.seed);
    DensityMatrix state = rho0;
    std::vector<TrajectoryStep> out;
    out.reserve(cfg.steps);
    for (std::size_t step = 1; step <= cfg.steps; ++step) {
        const double nm = sample_outcome(state, cfg.dn, rng);
        try {
            MeasurementRecord rec = apply_measurement(state, cfg.dn, nm);
            state = std::move(rec.post_state);
            out.push_back(TrajectoryStep{step, nm, number_expectation(state), rec.post_coherence,
                                         purity(state),
                                         cfg.record_states ? std::optional<DensityMatrix>(state) : std::nullopt});
        } catch (const Error &e) {
            std::ostringstream msg;
            msg << "trajectory seed " << cfg.seed << " step " << step << ": " << e.what();
            throw Error(e.kind(), msg.str());
        }
    }
    return out;
}

struct EnsembleStep {
    std::size_t index;
    double mean_number;
    ComplexAmplitude mean_coherence;
    double mean_purity;
};

struct EnsembleStats {
    std::vector<EnsembleStep> steps;
    std::vector<double> final_numbers;   // per shot, <n> after the last step
    std::vector<double> final_purities;  // per shot
};

/// Runs `shots` independent trajectories and averages them step by step.
/// Reduction order is by shot index, so the result does not depend on
/// `workers`.
inline EnsembleStats ensemble_stats(const DensityMatrix &rho0, const TrajectoryConfig &cfg, std::size_t shots,
                                    std::size_t workers = 1) {
    if (shots < 1) {
        throw Error(ErrorKind::InvalidArgument, "ensemble needs at least one shot");
    }
    std::vector<std::vector<TrajectoryStep>> runs(shots);
    detail::parallel_for(shots, workers, [&](std::size_t shot) {
        TrajectoryConfig shot_cfg(cfg.dn, cfg.steps, shot_seed(cfg.seed, shot), false);
        runs[shot] = run_trajectory(rho0, shot_cfg);
    });

    EnsembleStats stats;
    stats.steps.reserve(cfg.steps);
    const double inv = 1.0 / static_cast<double>(shots);
    for (std::size_t s = 0; s < cfg.steps; ++s) {
        double n_sum = 0.0;
        double purity_sum = 0.0;
        Complex a_sum = 0.0;
        for (std::size_t shot = 0; shot < shots; ++shot) {
            const TrajectoryStep &st = runs[shot][s];
            n_sum += st.post_number;
            a_sum += st.post_coherence;
            purity_sum += st.post_purity;
        }
        stats.steps.push_back(EnsembleStep{s + 1, n_sum * inv, a_sum * inv, purity_sum * inv});
    }
    stats.final_numbers.reserve(shots);
    stats.final_purities.reserve(shots);
    for (const auto &run : runs) {
        stats.final_numbers.push_back(run.back().post_number);
        stats.final_purities.push_back(run.back().post_purity);
    }
    return stats;
}

}  // namespace fockpovm
