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

// fockpovm: finite-resolution photon-number measurement data on the command
// line. Exit codes: 0 success, 1 argument/config error, 2 numerical or
// verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fockpovm/commands.hpp"

namespace {

using namespace fockpovm;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t worker_count() {
    const char *env = std::getenv("FOCKPOVM_THREADS");
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (env == nullptr || *env == '\0') {
        return hw;
    }
    try {
        std::size_t pos = 0;
        long long v = std::stoll(env, &pos);
        if (pos != std::string(env).size() || v < 1) {
            throw std::invalid_argument("bad");
        }
        return static_cast<std::size_t>(v);
    } catch (const std::exception &) {
        throw UsageError(std::string("FOCKPOVM_THREADS must be a positive integer, got '") + env + "'");
    }
}

std::string json_scalar_to_string(const nlohmann::json &v, const std::string &key) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "true" : "false";
    }
    if (v.is_number_integer() || v.is_number_unsigned()) {
        return v.dump();
    }
    if (v.is_number_float()) {
        std::ostringstream s;
        s.imbue(std::locale::classic());
        s.precision(17);
        s << v.get<double>();
        return s.str();
    }
    throw UsageError("config key '" + key + "' must be a scalar");
}

std::string normalize_key(std::string key) {
    for (char &c : key) {
        if (c == '_') {
            c = '-';
        }
    }
    if (key == "alpha-re") {
        key = "alpha";
    }
    return key;
}

/// Applies flat JSON keys to every option of `sub` not given on the command line.
void apply_config(CLI::App &root, CLI::App &sub, const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open config file '" + path + "'");
    }
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) {
        throw UsageError("config file must hold a flat JSON object");
    }
    for (const auto &[raw_key, value] : cfg.items()) {
        const std::string key = normalize_key(raw_key);
        if (key == "config") {
            continue;
        }
        CLI::Option *opt = sub.get_option_no_throw("--" + key);
        if (opt == nullptr) {
            bool known_elsewhere = false;
            for (CLI::App *other : root.get_subcommands({})) {
                known_elsewhere = known_elsewhere || other->get_option_no_throw("--" + key) != nullptr;
            }
            if (!known_elsewhere) {
                throw UsageError("unknown config key '" + raw_key + "'");
            }
            continue;
        }
        if (opt->count() > 0) {
            continue;  // command line wins
        }
        opt->add_result(json_scalar_to_string(value, raw_key));
        opt->run_callback();
    }
}

struct Outputs {
    std::string out;
    std::string summary;
};

std::ofstream open_output(const std::string &path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot open output file '" + path + "'");
    }
    return f;
}

template <typename Writer>
std::size_t emit(const std::string &path, Writer &&writer) {
    if (path.empty() || path == "-") {
        return writer(std::cout);
    }
    std::ostringstream buffer;
    std::size_t rows = writer(buffer);
    std::ofstream f = open_output(path);
    f << buffer.str();
    return rows;
}

struct GridOptions {
    double alpha_re = 0.0;
    double alpha_im = 0.0;
    std::optional<double> dn;
    std::optional<std::size_t> dim;
    std::optional<double> lo, hi, step;
    double refinement = 1.0;
    std::string method = "closed";
};

void add_grid_options(CLI::App &sub, GridOptions &g) {
    sub.add_option("--alpha", g.alpha_re, "Real part of the coherent amplitude");
    sub.add_option("--alpha-im", g.alpha_im, "Imaginary part of the coherent amplitude");
    sub.add_option("--dn", g.dn, "Measurement resolution (> 0)");
    sub.add_option("--dim", g.dim, "Fock-space truncation (default: from alpha)");
    sub.add_option("--lo", g.lo, "Lowest outcome on the grid");
    sub.add_option("--hi", g.hi, "Highest outcome on the grid");
    sub.add_option("--step", g.step, "Grid step");
    sub.add_option("--refinement", g.refinement, "Default-grid refinement factor (>= 1)");
    sub.add_option("--method", g.method, "closed | operator")->check(CLI::IsMember({"closed", "operator"}));
}

cli::OutcomeParams to_outcome_params(const GridOptions &g) {
    if (!g.dn) {
        throw UsageError("--dn is required");
    }
    cli::OutcomeParams p;
    p.alpha = ComplexAmplitude(g.alpha_re, g.alpha_im);
    p.dn = Resolution(*g.dn).value();
    p.dim = g.dim;
    p.lo = g.lo;
    p.hi = g.hi;
    p.step = g.step;
    p.refinement = g.refinement;
    p.method = cli::parse_method(g.method);
    // Surface grid and truncation-argument errors before any numerics run.
    (void)p.resolved_grid();
    if (p.dim && *p.dim < 1) {
        throw UsageError("--dim must be >= 1");
    }
    return p;
}

int run(int argc, char **argv) {
    CLI::App app{"Finite-resolution photon-number measurements on truncated Fock states"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "Flat JSON config file; flags override its keys");

    Outputs dist_out, coh_out, corr_out, traj_out;

    GridOptions dist_grid;
    CLI::App *dist = app.add_subcommand("dist", "Outcome probability density P(n_m)");
    add_grid_options(*dist, dist_grid);
    dist->add_option("--out", dist_out.out, "CSV output path (default stdout)");
    dist->add_option("--config", config_path, "Flat JSON config file");

    GridOptions coh_grid;
    std::optional<double> normalize_at;
    CLI::App *coh = app.add_subcommand("coherence", "Post-measurement coherence <a>_f(n_m)");
    add_grid_options(*coh, coh_grid);
    coh->add_option("--normalize-at", normalize_at, "Add columns normalized at this outcome");
    coh->add_option("--out", coh_out.out, "CSV output path (default stdout)");
    coh->add_option("--config", config_path, "Flat JSON config file");

    double corr_alpha_re = 0.0, corr_alpha_im = 0.0;
    cli::CorrelationParams corr;
    CLI::App *corr_cmd = app.add_subcommand("correlation", "Quantization/coherence correlation versus dn");
    corr_cmd->add_option("--alpha", corr_alpha_re, "Real part of the coherent amplitude");
    corr_cmd->add_option("--alpha-im", corr_alpha_im, "Imaginary part of the coherent amplitude");
    corr_cmd->add_option("--dn-min", corr.dn_min, "Smallest resolution");
    corr_cmd->add_option("--dn-max", corr.dn_max, "Largest resolution");
    corr_cmd->add_option("--steps", corr.steps, "Number of sweep points (>= 2)");
    corr_cmd->add_option("--refinement", corr.refinement, "Default-grid refinement factor (>= 1)");
    corr_cmd->add_flag("--show-unweighted", corr.show_unweighted,
                       "Also print the bare (unweighted) integrals for comparison");
    corr_cmd->add_option("--out", corr_out.out, "CSV output path (default stdout)");
    corr_cmd->add_option("--config", config_path, "Flat JSON config file");

    double traj_alpha_re = 0.0, traj_alpha_im = 0.0;
    std::optional<double> traj_dn;
    cli::TrajectoryParams traj;
    CLI::App *traj_cmd = app.add_subcommand("trajectory", "Monte-Carlo sequences of repeated measurements");
    traj_cmd->add_option("--alpha", traj_alpha_re, "Real part of the coherent amplitude");
    traj_cmd->add_option("--alpha-im", traj_alpha_im, "Imaginary part of the coherent amplitude");
    traj_cmd->add_option("--dn", traj_dn, "Measurement resolution (> 0)");
    traj_cmd->add_option("--dim", traj.dim, "Fock-space truncation (default: from alpha)");
    traj_cmd->add_option("--steps", traj.steps, "Measurements per trajectory (>= 1)");
    traj_cmd->add_option("--shots", traj.shots, "Number of trajectories (>= 1)");
    traj_cmd->add_option("--seed", traj.seed, "Base seed");
    traj_cmd->add_option("--out", traj_out.out, "Per-step CSV path (default stdout)");
    traj_cmd->add_option("--summary", traj_out.summary, "JSON summary path (default: <out stem>.json)");
    traj_cmd->add_option("--config", config_path, "Flat JSON config file");

    bool verify_as_json = false;
    std::string inject_fault;
    CLI::App *verify = app.add_subcommand("verify", "Run the cross-module invariant suite");
    verify->add_flag("--json", verify_as_json, "Machine-readable report");
    verify->add_option("--inject-fault", inject_fault)->group("")->check(CLI::IsMember({"parity-sign"}));
    verify->add_option("--config", config_path, "Flat JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App *active = app.get_subcommands().front();
    std::size_t workers = 1;
    try {
        workers = worker_count();
        if (!config_path.empty()) {
            apply_config(app, *active, config_path);
        }
    } catch (const UsageError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CLI::Error &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    }

    // Argument validation: everything thrown up to here is a usage error.
    std::optional<cli::OutcomeParams> outcome;
    try {
        if (active == dist) {
            outcome = to_outcome_params(dist_grid);
        } else if (active == coh) {
            outcome = to_outcome_params(coh_grid);
        } else if (active == corr_cmd) {
            corr.alpha = ComplexAmplitude(corr_alpha_re, corr_alpha_im);
            corr.workers = workers;
            (void)corr.resolutions();
            if (!(corr.refinement >= 1.0)) {
                throw UsageError("--refinement must be >= 1");
            }
            if (corr.alpha == ComplexAmplitude(0.0, 0.0)) {
                throw UsageError("--alpha must be nonzero for the normalized correlation");
            }
        } else if (active == traj_cmd) {
            if (!traj_dn) {
                throw UsageError("--dn is required");
            }
            traj.alpha = ComplexAmplitude(traj_alpha_re, traj_alpha_im);
            traj.dn = Resolution(*traj_dn).value();
            traj.workers = workers;
            if (traj.steps < 1 || traj.shots < 1) {
                throw UsageError("--steps and --shots must be >= 1");
            }
            if (traj.dim && *traj.dim < 1) {
                throw UsageError("--dim must be >= 1");
            }
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (active == dist) {
            std::size_t rows = emit(dist_out.out, [&](std::ostream &o) { return cli::write_dist_csv(*outcome, o); });
            if (!dist_out.out.empty() && dist_out.out != "-") {
                std::cout << "dist: wrote " << rows << " rows to " << dist_out.out << '\n';
            }
        } else if (active == coh) {
            cli::CoherenceParams p{*outcome, normalize_at};
            std::size_t rows = emit(coh_out.out, [&](std::ostream &o) { return cli::write_coherence_csv(p, o); });
            if (!coh_out.out.empty() && coh_out.out != "-") {
                std::cout << "coherence: wrote " << rows << " rows to " << coh_out.out << '\n';
            }
        } else if (active == corr_cmd) {
            std::size_t rows =
                emit(corr_out.out, [&](std::ostream &o) { return cli::write_correlation_csv(corr, o); });
            if (!corr_out.out.empty() && corr_out.out != "-") {
                std::cout << "correlation: wrote " << rows << " rows to " << corr_out.out << '\n';
            }
        } else if (active == traj_cmd) {
            nlohmann::ordered_json summary;
            emit(traj_out.out, [&](std::ostream &o) {
                summary = cli::write_trajectory_csv(traj, o);
                return traj.steps;
            });
            std::string summary_path = traj_out.summary;
            if (summary_path.empty() && !traj_out.out.empty() && traj_out.out != "-") {
                std::string stem = traj_out.out;
                std::size_t dot = stem.find_last_of('.');
                std::size_t slash = stem.find_last_of('/');
                if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
                    stem.resize(dot);
                }
                summary_path = stem + ".json";
            }
            if (!summary_path.empty()) {
                std::ofstream f = open_output(summary_path);
                f << summary.dump(2) << '\n';
            }
            if (!traj_out.out.empty() && traj_out.out != "-") {
                std::cout << "trajectory: " << traj.shots << " shots x " << traj.steps << " steps, median final purity "
                          << cli::format_number(summary["median_final_purity"].get<double>()) << ", summary in "
                          << summary_path << '\n';
            }
        } else if (active == verify) {
            VerifyOptions opts;
            opts.inject_parity_sign_error = inject_fault == "parity-sign";
            const std::vector<CheckResult> results = run_verification(opts);
            bool passed = true;
            if (verify_as_json) {
                nlohmann::ordered_json report = cli::verify_json(results);
                passed = report["passed"].get<bool>();
                std::cout << report.dump(2) << '\n';
            } else {
                passed = cli::write_verify_table(results, std::cout);
            }
            if (!passed) {
                for (const CheckResult &r : results) {
                    if (!r.passed) {
                        std::cerr << "verification failed: " << r.name << '\n';
                        break;
                    }
                }
                return kExitNumeric;
            }
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_argument_error() ? kExitUsage : kExitNumeric;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitNumeric;
    }
}
