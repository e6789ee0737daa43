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

// Data producers behind the `fockpovm` subcommands. Each writer is a pure
// function of its parameter struct and emits CSV with a fixed header; the
// command-line front end only parses flags and opens files.

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "fockpovm/analytics.hpp"
#include "fockpovm/correlation.hpp"
#include "fockpovm/error.hpp"
#include "fockpovm/fock_core.hpp"
#include "fockpovm/measurement.hpp"
#include "fockpovm/statistics.hpp"
#include "fockpovm/trajectory.hpp"
#include "fockpovm/verify.hpp"

namespace fockpovm::cli {

/// 15 significant digits, '.' separator, independent of the C locale.
inline std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 15);
    if (ec != std::errc()) {
        throw Error(ErrorKind::InvalidArgument, "number formatting failed");
    }
    return std::string(buf, end);
}

enum class Method { Closed, Operator };

inline Method parse_method(std::string_view name) {
    if (name == "closed") {
        return Method::Closed;
    }
    if (name == "operator") {
        return Method::Operator;
    }
    throw Error(ErrorKind::InvalidArgument, "method must be 'closed' or 'operator'");
}

/// Grid and truncation settings shared by `dist` and `coherence`. Unset
/// fields fall back to the default truncation rule and default grid.
struct OutcomeParams {
    ComplexAmplitude alpha = 0.0;
    double dn = 0.3;
    std::optional<std::size_t> dim;
    std::optional<double> lo;
    std::optional<double> hi;
    std::optional<double> step;
    double refinement = 1.0;
    Method method = Method::Closed;

    std::size_t resolved_dim() const {
        return dim.value_or(default_dimension(alpha));
    }

    OutcomeGrid resolved_grid() const {
        const OutcomeGrid fallback = default_grid(resolved_dim(), Resolution(dn), refinement);
        if (!lo && !hi && !step) {
            return fallback;
        }
        const double l = lo.value_or(fallback.lo());
        const double h = hi.value_or(fallback.hi());
        if (step) {
            return OutcomeGrid(l, h, *step);
        }
        return OutcomeGrid::covering(l, h, fallback.step());
    }
};

/// Evaluates P(nm) and <a>_f(nm) by either route with the same truncation.
class OutcomeEvaluator {
   public:
    explicit OutcomeEvaluator(const OutcomeParams &p)
        : method_(p.method),
          dn_(p.dn),
          series_(p.alpha, dn_, checked_dim(p)),
          state_(p.method == Method::Operator
                     ? std::optional<DensityMatrix>(make_coherent_state(p.alpha, TruncationConfig(p.resolved_dim())))
                     : std::nullopt) {
    }

    double density(double nm) const {
        return method_ == Method::Closed ? series_.density(nm) : outcome_density(*state_, dn_, nm);
    }

    ComplexAmplitude post_coherence(double nm) const {
        return method_ == Method::Closed ? series_.post_coherence(nm)
                                         : apply_measurement(*state_, dn_, nm).post_coherence;
    }

   private:
    // Both routes refuse a truncation that the state constructor would refuse.
    static std::size_t checked_dim(const OutcomeParams &p) {
        const TruncationConfig cfg(p.resolved_dim());
        check_coherent_truncation(p.alpha, cfg);
        return cfg.dim;
    }

    Method method_;
    Resolution dn_;
    ClosedFormSeries series_;
    std::optional<DensityMatrix> state_;
};

/// Returns the number of data rows written.
inline std::size_t write_dist_csv(const OutcomeParams &p, std::ostream &out) {
    const OutcomeEvaluator eval(p);
    const OutcomeGrid grid = p.resolved_grid();
    out << "n_m,P\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double nm = grid.point(i);
        out << format_number(nm) << ',' << format_number(eval.density(nm)) << '\n';
    }
    return grid.size();
}

struct CoherenceParams {
    OutcomeParams outcome;
    std::optional<double> normalize_at;
};

/// With `normalize_at`, two extra columns divide P and |<a>_f| by their
/// values at that outcome.
inline std::size_t write_coherence_csv(const CoherenceParams &p, std::ostream &out) {
    const OutcomeEvaluator eval(p.outcome);
    const OutcomeGrid grid = p.outcome.resolved_grid();
    double p_ref = 0.0;
    double a_ref = 0.0;
    if (p.normalize_at) {
        p_ref = eval.density(*p.normalize_at);
        if (!(p_ref > kDensityFloor)) {
            throw Error(ErrorKind::NegligibleOutcome, "density at the normalization point is negligible");
        }
        a_ref = std::abs(eval.post_coherence(*p.normalize_at));
        if (!(a_ref > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "coherence vanishes at the normalization point");
        }
    }

    out << "n_m,P,re_a_f,im_a_f";
    if (p.normalize_at) {
        out << ",P_norm,a_f_norm";
    }
    out << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double nm = grid.point(i);
        const double density = eval.density(nm);
        const ComplexAmplitude a = eval.post_coherence(nm);
        out << format_number(nm) << ',' << format_number(density) << ',' << format_number(a.real()) << ','
            << format_number(a.imag());
        if (p.normalize_at) {
            out << ',' << format_number(density / p_ref) << ',' << format_number(std::abs(a) / a_ref);
        }
        out << '\n';
    }
    return grid.size();
}

struct CorrelationParams {
    ComplexAmplitude alpha = 3.0;
    double dn_min = 0.05;
    double dn_max = 1.0;
    std::size_t steps = 96;
    double refinement = 1.0;
    bool show_unweighted = false;
    std::size_t workers = 1;

    std::vector<Resolution> resolutions() const {
        if (!(dn_min > 0.0 && dn_min < dn_max)) {
            throw Error(ErrorKind::InvalidArgument, "need 0 < dn-min < dn-max");
        }
        if (steps < 2) {
            throw Error(ErrorKind::InvalidArgument, "need at least two sweep steps");
        }
        std::vector<Resolution> out;
        out.reserve(steps);
        for (std::size_t i = 0; i < steps; ++i) {
            double t = static_cast<double>(i) / static_cast<double>(steps - 1);
            out.emplace_back(i + 1 == steps ? dn_max : dn_min + t * (dn_max - dn_min));
        }
        return out;
    }
};

namespace detail {

struct UnweightedIntegrals {
    double int_q;
    ComplexAmplitude int_a;
    ComplexAmplitude int_qa;
};

/// Bare integrals of Q, <a>_f and Q <a>_f over the grid, without the P(nm)
/// weight. They depend on the grid bounds and do not reproduce the closed
/// forms; printed only for comparison.
inline UnweightedIntegrals unweighted_integrals(ComplexAmplitude alpha, const CorrelationReport &r) {
    const ClosedFormSeries series(alpha, r.dn);
    std::vector<double> q(r.grid.size());
    std::vector<Complex> a(r.grid.size());
    std::vector<Complex> qa(r.grid.size());
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        const double nm = r.grid.point(i);
        q[i] = quantization(nm);
        a[i] = series.post_coherence(nm);
        qa[i] = q[i] * a[i];
    }
    return UnweightedIntegrals{trapezoid(r.grid, q), trapezoid(r.grid, a), trapezoid(r.grid, qa)};
}

}  // namespace detail

inline std::size_t write_correlation_csv(const CorrelationParams &p, std::ostream &out) {
    if (p.alpha == ComplexAmplitude(0.0, 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "alpha must be nonzero to normalize C by alpha");
    }
    const std::vector<Resolution> dns = p.resolutions();
    const std::vector<CorrelationReport> reports = resolution_sweep(p.alpha, dns, p.workers, p.refinement);

    out << "dn,avg_q,re_avg_a,neg_c_over_alpha_numeric,neg_c_over_alpha_closed";
    if (p.show_unweighted) {
        out << ",unweighted_int_q,unweighted_re_int_a,unweighted_re_c";
    }
    out << '\n';
    for (const CorrelationReport &r : reports) {
        const double numeric = -(r.c / p.alpha).real();
        const double closed = -(correlation_closed(p.alpha, r.dn) / p.alpha).real();
        out << format_number(r.dn.value()) << ',' << format_number(r.avg_q) << ',' << format_number(r.avg_a.real())
            << ',' << format_number(numeric) << ',' << format_number(closed);
        if (p.show_unweighted) {
            const detail::UnweightedIntegrals u = detail::unweighted_integrals(p.alpha, r);
            const ComplexAmplitude c = u.int_qa - u.int_q * u.int_a;
            out << ',' << format_number(u.int_q) << ',' << format_number(u.int_a.real()) << ','
                << format_number(c.real());
        }
        out << '\n';
    }
    return reports.size();
}

struct TrajectoryParams {
    ComplexAmplitude alpha = 1.0;
    double dn = 0.3;
    std::optional<std::size_t> dim;
    std::size_t steps = 50;
    std::size_t shots = 1;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
};

/// Writes the per-step ensemble CSV and returns the JSON summary.
inline nlohmann::ordered_json write_trajectory_csv(const TrajectoryParams &p, std::ostream &out) {
    const std::size_t dim = p.dim.value_or(default_dimension(p.alpha));
    const DensityMatrix rho0 = make_coherent_state(p.alpha, TruncationConfig(dim));
    const TrajectoryConfig cfg(Resolution(p.dn), p.steps, p.seed);
    const EnsembleStats stats = ensemble_stats(rho0, cfg, p.shots, p.workers);

    out << "step,mean_n,re_mean_a,im_mean_a,mean_purity\n";
    for (const EnsembleStep &s : stats.steps) {
        out << s.index << ',' << format_number(s.mean_number) << ',' << format_number(s.mean_coherence.real())
            << ',' << format_number(s.mean_coherence.imag()) << ',' << format_number(s.mean_purity) << '\n';
    }

    std::vector<double> counts(dim, 0.0);
    for (double n : stats.final_numbers) {
        auto k = static_cast<std::size_t>(std::llround(std::max(0.0, n)));
        counts[std::min(k, dim - 1)] += 1.0;
    }

    nlohmann::ordered_json summary;
    summary["config"] = {{"alpha_re", p.alpha.real()}, {"alpha_im", p.alpha.imag()},
                         {"dn", p.dn},                 {"dim", dim},
                         {"steps", p.steps},           {"shots", p.shots},
                         {"seed", p.seed}};
    nlohmann::ordered_json histogram = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < dim; ++k) {
        if (counts[k] > 0.0) {
            histogram.push_back({{"n", k}, {"count", static_cast<std::uint64_t>(counts[k])}});
        }
    }
    summary["final_number_histogram"] = histogram;
    summary["median_final_purity"] = median(stats.final_purities);

    try {
        const std::vector<double> probs = rho0.diagonal();
        const ChiSquareResult chi = chi_square_test(counts, probs, 0.01);
        summary["chi_square"] = {{"statistic", chi.statistic},
                                 {"dof", chi.dof},
                                 {"p_value", chi.p_value},
                                 {"critical_value", chi.critical_value},
                                 {"significance", chi.significance},
                                 {"passed", chi.passed}};
    } catch (const Error &e) {
        summary["chi_square"] = {{"error", e.what()}};
    }
    return summary;
}

/// Human-readable verification table. Returns true iff every check passed.
inline bool write_verify_table(const std::vector<CheckResult> &results, std::ostream &out) {
    bool all = true;
    for (const CheckResult &r : results) {
        out << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  worst=" << format_number(r.worst)
            << "  tol=" << format_number(r.tolerance) << "  (" << r.description << ")";
        if (!r.detail.empty()) {
            out << "  error: " << r.detail;
        }
        out << '\n';
        all = all && r.passed;
    }
    return all;
}

inline nlohmann::ordered_json verify_json(const std::vector<CheckResult> &results) {
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    bool all = true;
    for (const CheckResult &r : results) {
        nlohmann::ordered_json rec = {{"name", r.name},
                                      {"description", r.description},
                                      {"passed", r.passed},
                                      {"worst", std::isfinite(r.worst) ? nlohmann::ordered_json(r.worst) : nlohmann::ordered_json(nullptr)},
                                      {"tolerance", r.tolerance}};
        if (!r.detail.empty()) {
            rec["error"] = r.detail;
        }
        checks.push_back(rec);
        all = all && r.passed;
    }
    return {{"passed", all}, {"checks", checks}};
}

}  // namespace fockpovm::cli
