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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "dfsdecoh/dfsdecoh.hpp"
#include "jc_support.hpp"
#include "oracles.hpp"

using namespace dfsdecoh;

namespace {

namespace fs = std::filesystem;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<double> grid(double stop, int steps) {
    std::vector<double> t;
    for (int i = 0; i <= steps; ++i) {
        t.push_back(stop * i / steps);
    }
    return t;
}

VisibilityDataset dataset_from_curve(const DecoherenceCurve &c) {
    VisibilityDataset ds;
    for (std::size_t i = 0; i < c.size(); ++i) {
        ds.points.push_back({c.times[i], c.k[i].magnitude(), std::nullopt, 0});
    }
    return ds;
}

// 1. Published asd pairs.
Outcome sieve_published_verdicts() {
    struct Case {
        const char *name;
        double asd_exp, asd_gauss, threshold;
        Winner expected;
    };
    const Case cases[] = {
        {"A", 0.0095, 0.062, kDefaultTieThreshold, Winner::ExponentialDecay},
        {"B", 0.037, 0.0040, kDefaultTieThreshold, Winner::GaussianDecay},
        {"C strict", 0.0084, 0.0083, 0.0, Winner::GaussianDecay},
        {"C default", 0.0084, 0.0083, kDefaultTieThreshold, Winner::Tie},
        {"D", 0.084, 0.16, kDefaultTieThreshold, Winner::ExponentialDecay},
    };
    Outcome o{true, ""};
    for (const auto &c : cases) {
        const auto v = decide(c.asd_exp, c.asd_gauss, c.threshold);
        o.pass = o.pass && v.winner == c.expected;
        o.detail += std::string(c.name) + "=" + to_string(v.winner) + " ";
    }
    return o;
}

// 2. Closed-form |k| against an independent Simpson oracle.
Outcome fourier_law() {
    std::mt19937_64 rng(2002);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0, worst_lib = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double sigma = 0.2 + 2.8 * u(rng);
        const double t = (0.05 + 2.95 * u(rng)) / sigma;
        const double oracle = oracle::simpson_cosine_transform(
            [sigma](double x) { return oracle::gaussian_density(x, sigma); }, t, 12 * sigma, 20000);
        const auto dist = FrequencyDistribution::gaussian(0.0, sigma);
        const double analytic = coherence_analytic(dist, t).magnitude();
        worst = std::max(worst, std::abs(analytic - std::exp(-sigma * sigma * t * t / 2)) / analytic);
        worst = std::max(worst, std::abs(analytic - oracle) / oracle);
        worst_lib = std::max(worst_lib, std::abs(coherence_quadrature(dist, t, 200001).magnitude() - oracle) / oracle);
    }
    for (int i = 0; i < 10; ++i) {
        const double gamma = 0.2 + 2.8 * u(rng);
        const double t = (0.05 + 4.95 * u(rng)) / gamma;
        const double half = 1e4 * gamma;
        const double core = oracle::simpson_cosine_transform(
            [gamma](double x) { return oracle::lorentzian_density(x, gamma); }, t, half, 2000000);
        // Both tails by two rounds of integration by parts.
        const double g = oracle::lorentzian_density(half, gamma);
        const double dg = -2.0 * half * g / (half * half + gamma * gamma);
        const double tail = 2.0 * (-std::sin(half * t) * g / t - std::cos(half * t) * dg / (t * t));
        const double oracle = core + tail;
        const auto dist = FrequencyDistribution::lorentzian(0.0, gamma);
        const double analytic = coherence_analytic(dist, t).magnitude();
        worst = std::max(worst, std::abs(analytic - std::exp(-gamma * t)) / analytic);
        worst = std::max(worst, std::abs(analytic - oracle) / oracle);
        worst_lib = std::max(worst_lib, std::abs(coherence_quadrature(dist, t, 200001).magnitude() - oracle) / oracle);
    }
    return {worst <= 1e-6 && worst_lib <= 1e-6,
            fmt("20 pairs, max rel err analytic %.2e, library quadrature %.2e (limit 1e-6)", worst, worst_lib)};
}

// 3. Monte Carlo convergence.
Outcome mc_convergence() {
    std::mt19937_64 rng(3003);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = 100000;
    int ok = 0;
    for (int i = 0; i < 100; ++i) {
        const double center = -2.0 + 4.0 * u(rng);
        const double width = 0.1 + 2.0 * u(rng);
        const auto dist = i % 2 ? FrequencyDistribution::lorentzian(center, width)
                                : FrequencyDistribution::gaussian(center, width);
        const double t = (0.05 + 2.0 * u(rng)) / width;
        const auto mc = coherence_mc(dist, t, n, 1000 + i);
        const auto exact = coherence_analytic(dist, t);
        if (std::abs(mc.value - exact.value) <= 3.0 / std::sqrt(double(n)) + 3.0 * mc.std_error) {
            ++ok;
        }
    }
    return {ok >= 99, fmt("%d of 100 within 3/sqrt(n) + 3 stderr at n = 1e5 (need 99)", ok)};
}

// 4. Weight shape decides decay shape.
Outcome distribution_to_decay_shape() {
    std::mt19937_64 rng(4004);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int ok = 0;
    double worst_g = 0.0, worst_e = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double center = -1.0 + 2.0 * u(rng);
        const double sigma = 0.1 + 2.0 * u(rng);
        const auto t = grid((1.0 + 1.5 * u(rng)) / sigma, 7 + i % 5);
        const auto gs = sieve(dataset_from_curve(dfs_visibility_curve(FrequencyDistribution::gaussian(center, sigma), t)));
        worst_g = std::max(worst_g, gs.gaussian.asd);
        ok += gs.verdict.winner == Winner::GaussianDecay && gs.gaussian.asd <= 1e-18;

        const double gamma = 0.1 + 2.0 * u(rng);
        const auto tl = grid((1.0 + 2.0 * u(rng)) / gamma, 7 + i % 5);
        const auto ls =
            sieve(dataset_from_curve(dfs_visibility_curve(FrequencyDistribution::lorentzian(center, gamma), tl)));
        worst_e = std::max(worst_e, ls.exponential.asd);
        ok += ls.verdict.winner == Winner::ExponentialDecay && ls.exponential.asd <= 1e-18;
    }
    return {ok == 20, fmt("%d of 20 draws correct; max asd_gauss %.1e, max asd_exp %.1e (limit 1e-18)", ok, worst_g,
                          worst_e)};
}

// 5. DFS immunity to common-mode field noise; test-state exponent ratio.
Outcome dfs_field_protection() {
    const double sigma = 0.7;
    const auto t = grid(3.0, 12);
    double worst = 0.0;
    for (double time : t) {
        const auto rho = ensemble_density_four(dfs_equal_state(), FrequencyDistribution::gaussian(0.3, sigma),
                                               FrequencyDistribution::point_mass(0.0), time, McParams{20000, 5, 0});
        worst = std::max(worst, std::abs(visibility(subspace_density(rho, Basis4::UpDown, Basis4::DownUp)) - 1.0));
    }
    CurveOptions exact_average;
    exact_average.method = CoherenceMethod::Quadrature;
    for (const auto &k : dfs_visibility_curve(FrequencyDistribution::point_mass(0.0), t, exact_average).k) {
        worst = std::max(worst, std::abs(k.magnitude() - 1.0));
    }
    const auto dist = FrequencyDistribution::gaussian(0.0, sigma);
    const auto test = fit_quadratic_pure(log_transform(dataset_from_curve(test_state_visibility_curve(dist, t))));
    const auto dfs = fit_quadratic_pure(log_transform(dataset_from_curve(dfs_visibility_curve(dist, t))));
    const double ratio = test.p1 / dfs.p1;
    // Same check on the four-level ensemble (test state, Monte Carlo).
    const double t_mc = 1.0;
    const auto rho = ensemble_density_four(test_state(), dist, FrequencyDistribution::point_mass(0.0), t_mc,
                                           McParams{200000, 6, 0});
    const double v_mc = visibility(subspace_density(rho, Basis4::UpUp, Basis4::DownDown));
    const double v_expected = std::exp(-4.0 * sigma * sigma * t_mc * t_mc / 2.0);
    const bool mc_ok = std::abs(v_mc - v_expected) <= 5.0 / std::sqrt(200000.0);
    return {worst <= 1e-12 && std::abs(ratio - 4.0) <= 1e-9 && mc_ok,
            fmt("DFS max |V-1| %.1e (limit 1e-12); exponent ratio %.12f (want 4); ensemble test V %.4f vs %.4f", worst,
                ratio, v_mc, v_expected)};
}

// 6. Engineered reservoir.
Outcome reservoir_protection() {
    std::mt19937_64 rng(6006);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const auto p = JcParams::from_detuning(0.2 + 2 * u(rng), 5 + 300 * u(rng));
        const double dt = 0.1 + u(rng);
        const IntensityNoise noise{200 * u(rng), 50 * u(rng), dt};
        std::vector<double> t;
        for (int s = 0; s <= 10; ++s) {
            t.push_back(dt * 20 * s);
        }
        const auto c = engineered_decoherence_mc(dfs_equal_state(), noise, p, t, 2000, 60 + i);
        for (const auto &k : c.k) {
            worst = std::max(worst, std::abs(k.magnitude() - 1.0));
        }
    }
    const auto p = JcParams::from_detuning(1.0, 200.0);
    const IntensityNoise noise{100, 10, 1.0};
    const double gamma = white_noise_rate(p, noise).gamma;
    const auto c = engineered_decoherence_mc(test_state(), noise, p, grid(400, 40), 100000, 66);
    std::vector<LogPoint> pts;
    for (std::size_t i = 0; i < c.size(); ++i) {
        pts.push_back({c.times[i], std::log(c.k[i].magnitude())});
    }
    const double rate = -fit_linear(pts).p1;
    const double rel = std::abs(rate / gamma - 1.0);
    return {worst <= 1e-9 && rel <= 0.05,
            fmt("DFS max ||k|-1| %.1e (limit 1e-9); test rate %.5e vs gamma %.5e, rel %.2f%% (limit 5%%)", worst,
                rate, gamma, 100 * rel)};
}

// 7. Dispersive approximation against the exact truncated model.
Outcome dispersive_accuracy() {
    const std::size_t n = 2;
    const auto at400 = jccheck::compare_exact_to_dispersive(jccheck::params_for_ratio(1.0, n, 1.0 / 400.0), n);
    std::string detail = fmt("ratio 1/400: max phase err %.3f%% (limit 0.5%%); ", 100 * at400.relative_phase_error());
    bool pass = at400.relative_phase_error() <= 0.005;

    std::vector<double> x, y;
    for (double d : {10.0, 30.0, 100.0}) {
        const auto p = JcParams::from_detuning(1.0, d);
        const auto cmp = jccheck::compare_exact_to_dispersive(p, n);
        x.push_back(std::log(check_dispersive_validity(p, n)));
        y.push_back(std::log(cmp.relative_phase_error()));
        detail += fmt("delta %gg: %.2e; ", d, cmp.relative_phase_error());
    }
    const bool monotone = y[0] > y[1] && y[1] > y[2];
    std::vector<LogPoint> pts;
    for (std::size_t i = 0; i < x.size(); ++i) {
        pts.push_back({x[i], y[i]});
    }
    const double slope = fit_linear(pts).p1;
    detail += fmt("log-log slope %.3f (want 0.5..2)", slope);
    pass = pass && monotone && slope >= 0.5 && slope <= 2.0;
    return {pass, detail};
}

// 8. Classifier accuracy on synthetic data around the published fit magnitudes.
Outcome classifier_power() {
    std::mt19937_64 rng(8008);
    std::uniform_real_distribution<double> scale(0.7, 1.3);
    std::uniform_real_distribution<double> intercept(-1.0, -0.6);
    const auto t_exp = grid(1400, 7);
    const auto t_gauss = grid(350, 7);
    int exp_ok = 0, gauss_ok = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto e = generate_synthetic(DecayFamily::ExponentialDecay, intercept(rng), -0.00224 * scale(rng),
                                          t_exp, 0.1, seed);
        exp_ok += sieve(e).verdict.winner == Winner::ExponentialDecay;
        const auto g = generate_synthetic(DecayFamily::GaussianDecay, intercept(rng), -0.391e-4 * scale(rng),
                                          t_gauss, 0.1, 10000 + seed);
        gauss_ok += sieve(g).verdict.winner == Winner::GaussianDecay;
    }
    return {exp_ok >= 450 && gauss_ok >= 450,
            fmt("exponential %.1f%%, Gaussian %.1f%% correct of 500 each (need 90%%)", exp_ok / 5.0, gauss_ok / 5.0)};
}

// 9. Closed-form least squares against nested grid search.
Outcome least_squares_optimality() {
    std::mt19937_64 rng(9009);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_asd = 0.0, worst_identity = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<LogPoint> pts;
        double t = 0.0;
        for (int i = 0; i < 3 + trial % 10; ++i) {
            t += 0.5 + 40 * u(rng);
            pts.push_back({t, -3.0 * u(rng)});
        }
        for (const auto &fit : {fit_linear(pts), fit_quadratic_pure(pts)}) {
            std::vector<double> x, f;
            double sum_r = 0, sum_rx = 0, scale_r = 0, scale_rx = 0;
            for (const auto &p : pts) {
                x.push_back(fit.regressor(p.t));
                f.push_back(p.f);
                const double r = p.f - fit.model(p.t);
                sum_r += r;
                sum_rx += r * fit.regressor(p.t);
                scale_r += std::abs(p.f);
                scale_rx += std::abs(p.f * fit.regressor(p.t));
            }
            const auto g = oracle::nested_grid_search(x, f);
            worst_asd = std::max(worst_asd, fit.asd - g.asd);
            worst_identity = std::max({worst_identity, std::abs(sum_r) / scale_r, std::abs(sum_rx) / scale_rx});
        }
    }
    return {worst_asd <= 1e-5 && worst_identity <= 1e-9,
            fmt("max asd excess over grid search %.1e (limit 1e-5); max residual identity %.1e (limit 1e-9)",
                worst_asd, worst_identity)};
}

// 10. Byte-identical outputs across runs and thread counts.
std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const fs::path dir = fs::path(DFSDECOH_TEST_TMP) / "acceptance";
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"field_gauss", "simulate-field --dist gaussian --center 0.2 --sigma 0.8 --method mc --n 100000 --seed 7 "
                        "--times 0:5:20"},
        {"field_lorentz", "simulate-field --dist lorentzian --gamma 0.5 --method mc --n 50000 --seed 8 --times 0:4:8"},
        {"field_emp", "simulate-field --dist empirical --samples -0.5,0.1,0.4,2 --method mc --n 30000 --seed 9 "
                      "--times 0:3:6"},
        {"reservoir", "simulate-reservoir --g 1 --omega 400 --n-mean 100 --n-std 10 --dt 1 --times 0:200:10 "
                      "--n-traj 5000 --seed 10"},
        {"generate", "generate --family gaussian --intercept -0.5 --coef -2e-5 --noise 0.1 --times 0:300:7 --seed 11"},
    };
    int identical = 0;
    std::string failures;
    for (const auto &[name, args] : commands) {
        std::string reference;
        bool same = true;
        for (const char *threads : {"1", "1", "2", "8"}) {
            const auto prefix = dir / (name + "_t" + threads);
            const bool has_curves = name != "generate";
            const std::string cmd = std::string("\"") + DFSDECOH_CLI_PATH + "\" " + args +
                                    (has_curves ? std::string(" --threads ") + threads + " --curve-out " +
                                                      prefix.string()
                                                : std::string()) +
                                    " > \"" + prefix.string() + ".out\" 2> /dev/null";
            const int status = std::system(cmd.c_str());
            if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
                same = false;
                break;
            }
            std::string bytes = slurp(prefix.string() + ".out");
            for (const char *suffix : {"_dfs.csv", "_test.csv"}) {
                if (fs::exists(prefix.string() + suffix)) {
                    bytes += slurp(prefix.string() + suffix);
                }
            }
            if (reference.empty()) {
                reference = bytes;
            }
            same = same && bytes == reference && !bytes.empty();
        }
        identical += same;
        if (!same) {
            failures += " " + name;
        }
    }
    return {identical == static_cast<int>(commands.size()),
            fmt("%d of %zu commands byte-identical over runs and 1/2/8 threads%s", identical, commands.size(),
                failures.empty() ? "" : (" (differs:" + failures + ")").c_str())};
}

}  // namespace

int main() {
    struct Criterion {
        const char *name;
        double time_limit;  // seconds, 0 = none
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"sieve verdicts on published asd pairs", 1, sieve_published_verdicts},
        {"Fourier-transform law against quadrature", 10, fourier_law},
        {"Monte Carlo convergence", 60, mc_convergence},
        {"weight shape determines decay shape", 0, distribution_to_decay_shape},
        {"DFS protection under field noise", 0, dfs_field_protection},
        {"DFS protection under engineered reservoir", 120, reservoir_protection},
        {"dispersive approximation accuracy", 0, dispersive_accuracy},
        {"classifier power on synthetic data", 30, classifier_power},
        {"least-squares optimality", 0, least_squares_optimality},
        {"determinism across runs and threads", 0, determinism},
    };
    int failed = 0;
    int index = 0;
    for (const auto &c : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0 && secs > c.time_limit) {
            o.pass = false;
            o.detail += fmt(" [over time limit %.0f s]", c.time_limit);
        }
        failed += !o.pass;
        std::printf("AC%-2d %s  %-44s %7.2f s  %s\n", index, o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d acceptance criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
