// Copyright 2026 The dfsdecoh Authors
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

// Batch commands behind the dfsdecoh tool. Each command builds a JSON
// report; `run_command` maps failures to exit codes (0 ok, 2 input or data
// error, 1 internal error).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfsdecoh/errors.hpp"
#include "dfsdecoh/fieldnoise.hpp"
#include "dfsdecoh/io.hpp"
#include "dfsdecoh/modelfit.hpp"
#include "dfsdecoh/reservoir.hpp"
#include "dfsdecoh/version.hpp"

namespace dfsdecoh::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitData = 2;
inline constexpr int kReportSchemaVersion = 1;

struct RunConfig {
    std::string command;
    std::uint64_t seed = 1;
    std::string out;  // report (or CSV for generate); empty = stdout
    std::string times = "0:10:10";
    unsigned threads = 0;

    // fit / discriminate
    std::string input;
    double tie_threshold = kDefaultTieThreshold;

    // simulate-field
    std::string dist = "gaussian";
    double center = 0.0;
    double sigma = 1.0;
    double gamma = 1.0;
    std::vector<double> samples;
    std::string state = "both";
    std::string method = "analytic";
    std::size_t n = 100000;
    std::size_t quad_points = 200001;
    std::string curve_out;  // prefix for <prefix>_dfs.csv / <prefix>_test.csv

    // simulate-reservoir
    double g = 1.0;
    double omega = 400.0;
    double omega_f = 0.0;
    double n_mean = 100.0;
    double n_std = 10.0;
    double dt = 1.0;
    std::size_t n_traj = 10000;

    // generate
    std::string family = "exponential";
    double intercept = -0.803;
    double coef = -0.00224;
    double noise = 0.0;
};

/// Parsed-flag echo stored in every report. Output paths and the thread
/// count are left out: they do not affect any numeric result.
inline json config_echo(const RunConfig &c) {
    json j;
    j["command"] = c.command;
    j["seed"] = c.seed;
    if (c.command != "fit" && c.command != "discriminate") {
        j["times"] = c.times;
    }
    if (c.command == "fit" || c.command == "discriminate") {
        j["input"] = c.input;
        j["tie_threshold"] = c.tie_threshold;
    } else if (c.command == "simulate-field") {
        j["dist"] = c.dist;
        j["center"] = c.center;
        if (c.dist == "gaussian") {
            j["sigma"] = c.sigma;
        } else if (c.dist == "lorentzian") {
            j["gamma"] = c.gamma;
        } else {
            j["samples"] = c.samples;
        }
        j["state"] = c.state;
        j["method"] = c.method;
        if (c.method == "mc") {
            j["n"] = c.n;
        } else if (c.method == "quadrature") {
            j["quad_points"] = c.quad_points;
        }
    } else if (c.command == "simulate-reservoir") {
        j["g"] = c.g;
        j["omega"] = c.omega;
        j["omega_f"] = c.omega_f;
        j["n_mean"] = c.n_mean;
        j["n_std"] = c.n_std;
        j["dt"] = c.dt;
        j["n_traj"] = c.n_traj;
    }
    return j;
}

inline json fit_json(const FitResult &f) {
    json j;
    j["family"] = to_string(f.family);
    j["model"] = f.family == DecayFamily::ExponentialDecay ? "F = a t + b" : "F = A t^2 + B";
    j["intercept"] = f.p0;
    j["coefficient"] = f.p1;
    j["asd"] = f.asd;
    return j;
}

inline json curve_json(const std::string &label, const DecoherenceCurve &curve) {
    json j;
    j["label"] = label;
    json times = json::array(), abs_k = json::array(), re_k = json::array(), im_k = json::array(),
         se = json::array();
    for (std::size_t i = 0; i < curve.size(); ++i) {
        times.push_back(curve.times[i]);
        abs_k.push_back(std::abs(curve.k[i].value));
        re_k.push_back(curve.k[i].value.real());
        im_k.push_back(curve.k[i].value.imag());
        se.push_back(curve.k[i].std_error);
    }
    j["time"] = std::move(times);
    j["abs_k"] = std::move(abs_k);
    j["re_k"] = std::move(re_k);
    j["im_k"] = std::move(im_k);
    j["stderr"] = std::move(se);
    return j;
}

inline json report_skeleton(const RunConfig &c) {
    json j;
    j["schema"] = "dfsdecoh-report";
    j["schema_version"] = kReportSchemaVersion;
    j["version"] = kVersion;
    j["seed"] = c.seed;
    j["config"] = config_echo(c);
    j["fits"] = json::array();
    j["verdict"] = nullptr;
    return j;
}

struct CommandResult {
    json report;
    std::vector<std::string> warnings;
};

inline CommandResult cmd_fit(const RunConfig &c) {
    const auto ds = io::ingest_csv(c.input);
    const auto outcome = sieve(ds, c.tie_threshold);
    CommandResult r{report_skeleton(c), {}};
    r.report["n_points"] = ds.size();
    r.report["fits"].push_back(fit_json(outcome.exponential));
    r.report["fits"].push_back(fit_json(outcome.gaussian));
    json v;
    v["winner"] = to_string(outcome.verdict.winner);
    v["asd_exp"] = outcome.verdict.asd_exp;
    v["asd_gauss"] = outcome.verdict.asd_gauss;
    v["margin"] = outcome.verdict.margin;
    v["tie_threshold"] = c.tie_threshold;
    r.report["verdict"] = std::move(v);
    return r;
}

inline FrequencyDistribution distribution_from(const RunConfig &c) {
    if (c.dist == "gaussian") {
        return FrequencyDistribution::gaussian(c.center, c.sigma);
    }
    if (c.dist == "lorentzian") {
        return FrequencyDistribution::lorentzian(c.center, c.gamma);
    }
    if (c.dist == "empirical") {
        return FrequencyDistribution::empirical(c.samples);
    }
    throw Error(ErrorKind::ConfigError, "unknown distribution '" + c.dist + "'");
}

inline CoherenceMethod method_from(const std::string &m) {
    if (m == "analytic") {
        return CoherenceMethod::Analytic;
    }
    if (m == "quadrature") {
        return CoherenceMethod::Quadrature;
    }
    if (m == "mc") {
        return CoherenceMethod::MonteCarlo;
    }
    throw Error(ErrorKind::ConfigError, "unknown method '" + m + "'");
}

inline void write_text_file(const std::string &path, const std::string &contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorKind::ConfigError, "cannot write " + path);
    }
    f << contents;
}

inline void emit_curve(const RunConfig &c, const std::string &label, const DecoherenceCurve &curve,
                       CommandResult &r) {
    r.report["curves"].push_back(curve_json(label, curve));
    if (!c.curve_out.empty()) {
        std::ostringstream csv;
        io::write_curve_csv(curve, csv);
        write_text_file(c.curve_out + "_" + label + ".csv", csv.str());
    }
}

inline CommandResult cmd_simulate_field(const RunConfig &c) {
    const auto dist = distribution_from(c);
    const auto times = io::parse_time_grid(c.times);
    if (c.state != "dfs" && c.state != "test" && c.state != "both") {
        throw Error(ErrorKind::ConfigError, "state must be dfs, test or both");
    }
    CurveOptions opts;
    opts.method = method_from(c.method);
    opts.quadrature_points = c.quad_points;
    opts.mc = {c.n, c.seed, c.threads};

    CommandResult r{report_skeleton(c), {}};
    r.report["curves"] = json::array();
    if (c.state != "test") {
        emit_curve(c, "dfs", dfs_visibility_curve(dist, times, opts), r);
    }
    if (c.state != "dfs") {
        emit_curve(c, "test", test_state_visibility_curve(dist, times, opts), r);
    }
    return r;
}

inline CommandResult cmd_simulate_reservoir(const RunConfig &c) {
    const JcParams p(c.g, c.omega, c.omega_f);
    const IntensityNoise noise{c.n_mean, c.n_std, c.dt};
    noise.validate();
    const auto times = io::parse_time_grid(c.times);

    CommandResult r{report_skeleton(c), {}};
    const auto n_max = static_cast<std::size_t>(std::ceil(c.n_mean + 5.0 * c.n_std));
    const double ratio = check_dispersive_validity(p, n_max);
    json diag;
    diag["delta"] = p.delta();
    diag["stark_omega"] = p.stark();
    diag["validity_n_max"] = n_max;
    diag["validity_ratio"] = ratio;
    diag["white_noise_rate"] = white_noise_rate(p, noise).gamma;
    r.report["diagnostics"] = std::move(diag);
    if (ratio > kValidityWarnRatio) {
        r.warnings.push_back("dispersive validity ratio g^2(n+1)/delta^2 = " + io::format_double(ratio) +
                             " exceeds " + io::format_double(kValidityWarnRatio));
    }

    r.report["curves"] = json::array();
    ReservoirOptions opts;
    opts.threads = c.threads;
    opts.pair = CoherencePair::Dfs;
    emit_curve(c, "dfs", engineered_decoherence_mc(dfs_equal_state(), noise, p, times, c.n_traj, c.seed, opts), r);
    opts.pair = CoherencePair::Test;
    emit_curve(c, "test", engineered_decoherence_mc(test_state(), noise, p, times, c.n_traj, c.seed, opts), r);
    return r;
}

inline DecayFamily family_from(const std::string &f) {
    if (f == "exponential") {
        return DecayFamily::ExponentialDecay;
    }
    if (f == "gaussian") {
        return DecayFamily::GaussianDecay;
    }
    throw Error(ErrorKind::ConfigError, "family must be exponential or gaussian");
}

/// Returns the dataset CSV text.
inline std::string cmd_generate(const RunConfig &c) {
    const auto ds =
        generate_synthetic(family_from(c.family), c.intercept, c.coef, io::parse_time_grid(c.times), c.noise, c.seed);
    std::ostringstream csv;
    io::write_dataset_csv(ds, csv);
    return csv.str();
}

/// Runs one command, writing the report (or CSV) to `c.out` or `out`, and
/// warnings and errors to `diag`. Returns the process exit code.
inline int run_command(const RunConfig &c, std::ostream &out, std::ostream &diag) {
    try {
        std::string text;
        if (c.command == "generate") {
            text = cmd_generate(c);
        } else {
            CommandResult r;
            if (c.command == "fit" || c.command == "discriminate") {
                r = cmd_fit(c);
            } else if (c.command == "simulate-field") {
                r = cmd_simulate_field(c);
            } else if (c.command == "simulate-reservoir") {
                r = cmd_simulate_reservoir(c);
            } else {
                throw Error(ErrorKind::ConfigError, "unknown command '" + c.command + "'");
            }
            r.report["warnings"] = r.warnings;
            for (const auto &w : r.warnings) {
                diag << "warning: " << w << '\n';
            }
            text = r.report.dump(2) + "\n";
        }
        if (c.out.empty()) {
            out << text;
        } else {
            write_text_file(c.out, text);
        }
        return kExitOk;
    } catch (const Error &e) {
        diag << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception &e) {
        diag << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace dfsdecoh::cli
