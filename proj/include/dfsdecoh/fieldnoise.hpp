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

// Quasi-static field-noise dephasing of two ions under
//   H = (omega_m / 2)(sz1 + sz2) + (omega_d / 2)(sz1 - sz2),
// with the coherence factor k(t) = <exp(i nu t)> computed in closed form,
// by trapezoid quadrature of the characteristic-function integral, or by
// counter-based Monte Carlo.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "dfsdecoh/errors.hpp"
#include "dfsdecoh/random.hpp"
#include "dfsdecoh/special.hpp"
#include "dfsdecoh/spinspace.hpp"

namespace dfsdecoh {

struct SpinFrequencies {
    double omega_1 = 0.0;
    double omega_2 = 0.0;

    static SpinFrequencies from_mean_diff(double omega_m, double omega_d) noexcept {
        return {omega_m + omega_d, omega_m - omega_d};
    }
    double omega_m() const noexcept {
        return 0.5 * (omega_1 + omega_2);
    }
    double omega_d() const noexcept {
        return 0.5 * (omega_1 - omega_2);
    }
};

struct GaussianWeight {
    double center = 0.0;
    double sigma = 0.0;
};

/// p(nu) = (hwhm / pi) / ((nu - center)^2 + hwhm^2).
struct LorentzianWeight {
    double center = 0.0;
    double hwhm = 1.0;
};

/// Equal-weight point masses.
struct EmpiricalWeight {
    std::vector<double> samples;
};

/// Stochastic weight p(nu) of a fluctuating angular frequency.
class FrequencyDistribution {
  public:
    using Variant = std::variant<GaussianWeight, LorentzianWeight, EmpiricalWeight>;

    static FrequencyDistribution gaussian(double center, double sigma) {
        return FrequencyDistribution(GaussianWeight{center, sigma});
    }
    static FrequencyDistribution lorentzian(double center, double hwhm) {
        return FrequencyDistribution(LorentzianWeight{center, hwhm});
    }
    static FrequencyDistribution empirical(std::vector<double> samples) {
        return FrequencyDistribution(EmpiricalWeight{std::move(samples)});
    }
    static FrequencyDistribution point_mass(double nu) {
        return empirical({nu});
    }

    const Variant &weight() const noexcept {
        return weight_;
    }

    /// Same shape translated by `delta` in frequency.
    FrequencyDistribution shifted(double delta) const {
        return std::visit(
            [delta](auto w) -> FrequencyDistribution {
                if constexpr (std::is_same_v<decltype(w), EmpiricalWeight>) {
                    for (auto &s : w.samples) {
                        s += delta;
                    }
                } else {
                    w.center += delta;
                }
                return FrequencyDistribution(std::move(w));
            },
            weight_);
    }

    /// Draws one frequency from draw `j` of `stream`.
    double sample(const CounterStream &stream, std::uint32_t j = 0) const {
        return std::visit(
            [&](const auto &w) -> double {
                using W = std::decay_t<decltype(w)>;
                if constexpr (std::is_same_v<W, GaussianWeight>) {
                    return w.center + w.sigma * stream.normal(j);
                } else if constexpr (std::is_same_v<W, LorentzianWeight>) {
                    return w.center + w.hwhm * std::tan(std::numbers::pi * (stream.uniform(j) - 0.5));
                } else {
                    const auto idx = static_cast<std::size_t>(stream.uniform(j) * static_cast<double>(w.samples.size()));
                    return w.samples[std::min(idx, w.samples.size() - 1)];
                }
            },
            weight_);
    }

  private:
    explicit FrequencyDistribution(Variant w) : weight_(std::move(w)) {
        std::visit(
            [](const auto &v) {
                using W = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<W, GaussianWeight>) {
                    if (!std::isfinite(v.center) || !std::isfinite(v.sigma) || v.sigma < 0) {
                        throw Error(ErrorKind::ConfigError, "Gaussian weight needs finite center and sigma >= 0");
                    }
                } else if constexpr (std::is_same_v<W, LorentzianWeight>) {
                    if (!std::isfinite(v.center) || !std::isfinite(v.hwhm) || !(v.hwhm > 0)) {
                        throw Error(ErrorKind::ConfigError, "Lorentzian weight needs finite center and hwhm > 0");
                    }
                } else {
                    if (v.samples.empty()) {
                        throw Error(ErrorKind::ConfigError, "empirical weight needs at least one sample");
                    }
                    for (double s : v.samples) {
                        if (!std::isfinite(s)) {
                            throw Error(ErrorKind::ConfigError, "empirical sample is not finite");
                        }
                    }
                }
            },
            weight_);
    }

    Variant weight_;
};

/// Coherence factor estimate. `std_error` is 0 for closed forms, an error
/// bound for quadrature and the standard error of the mean for Monte Carlo.
struct CoherenceFactor {
    Complex value{1.0, 0.0};
    double std_error = 0.0;

    double magnitude() const noexcept {
        return std::abs(value);
    }
};

struct DecoherenceCurve {
    std::vector<double> times;
    std::vector<CoherenceFactor> k;

    std::size_t size() const noexcept {
        return times.size();
    }
};

enum class CoherenceMethod { Analytic, Quadrature, MonteCarlo };

inline const char *to_string(CoherenceMethod m) {
    switch (m) {
        case CoherenceMethod::Analytic: return "analytic";
        case CoherenceMethod::Quadrature: return "quadrature";
        case CoherenceMethod::MonteCarlo: return "mc";
    }
    return "?";
}

struct McParams {
    std::size_t n_samples = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct CurveOptions {
    CoherenceMethod method = CoherenceMethod::Analytic;
    std::size_t quadrature_points = 200001;
    McParams mc{};
};

namespace detail {

inline void require_time(double t) {
    if (!std::isfinite(t) || t < 0) {
        throw Error(ErrorKind::ConfigError, "time must be finite and >= 0");
    }
}

inline void require_grid(const std::vector<double> &times) {
    if (times.empty()) {
        throw Error(ErrorKind::ConfigError, "time grid is empty");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        require_time(times[i]);
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw Error(ErrorKind::ConfigError, "time grid must be strictly increasing");
        }
    }
}

inline constexpr std::size_t kMcBlock = 8192;

}  // namespace detail

inline DfsPureState evolve_dfs_fixed(const DfsPureState &state, double omega_d, double t) {
    detail::require_time(t);
    const Complex phase = std::polar(1.0, -omega_d * t);
    return DfsPureState(state.alpha() * phase, state.beta() * std::conj(phase));
}

/// Exact evolution under the diagonal two-spin Hamiltonian for fixed
/// frequencies: energies (+omega_m, +omega_d, -omega_d, -omega_m).
inline FourLevelState evolve_four_fixed(const FourLevelState &state, const SpinFrequencies &freqs, double t) {
    detail::require_time(t);
    const Complex pm = std::polar(1.0, -freqs.omega_m() * t);
    const Complex pd = std::polar(1.0, -freqs.omega_d() * t);
    const auto &a = state.amplitudes();
    return FourLevelState({a[0] * pm, a[1] * pd, a[2] * std::conj(pd), a[3] * std::conj(pm)});
}

/// Closed-form characteristic function of Gaussian and Lorentzian weights.
inline CoherenceFactor coherence_analytic(const FrequencyDistribution &dist, double t) {
    detail::require_time(t);
    return std::visit(
        [t](const auto &w) -> CoherenceFactor {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, GaussianWeight>) {
                return {std::polar(std::exp(-0.5 * w.sigma * w.sigma * t * t), w.center * t), 0.0};
            } else if constexpr (std::is_same_v<W, LorentzianWeight>) {
                return {std::polar(std::exp(-w.hwhm * t), w.center * t), 0.0};
            } else {
                throw Error(ErrorKind::UnsupportedAnalytic,
                            "empirical weights have no closed form; use quadrature or mc");
            }
        },
        dist.weight());
}

/// Trapezoid evaluation of k = int exp(i nu t) p(nu) d nu.
///
/// Windows: Gaussian center +- 12 sigma; Lorentzian center +- 1e4 hwhm with
/// the 1/x^2 part of the tails added back in closed form. Empirical weights
/// are averaged exactly. `std_error` bounds truncation, aliasing and
/// rounding.
inline CoherenceFactor coherence_quadrature(const FrequencyDistribution &dist, double t, std::size_t n_points) {
    detail::require_time(t);
    if (n_points < 1000) {
        throw Error(ErrorKind::ConfigError, "quadrature needs at least 1000 points");
    }
    if (t == 0.0) {
        return {Complex{1.0, 0.0}, 0.0};
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double rounding = static_cast<double>(n_points) * eps;

    // Sum of cos(x t) p(x) over the symmetric trapezoid grid on [-W, W].
    auto trapezoid = [&](double half_width, auto density) {
        const double h = 2.0 * half_width / static_cast<double>(n_points - 1);
        if (h * t > std::numbers::pi / 2.0) {
            throw Error(ErrorKind::ResolutionError,
                        "grid step " + std::to_string(h) + " too coarse for t = " + std::to_string(t) +
                            "; increase n_points");
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < n_points; ++i) {
            const double x = -half_width + h * static_cast<double>(i);
            const double w = (i == 0 || i + 1 == n_points) ? 0.5 : 1.0;
            sum += w * std::cos(x * t) * density(x);
        }
        return std::pair{sum * h, h};
    };

    return std::visit(
        [&](const auto &w) -> CoherenceFactor {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, GaussianWeight>) {
                if (w.sigma == 0.0) {
                    return {std::polar(1.0, w.center * t), 0.0};
                }
                const double s = w.sigma;
                const double norm = 1.0 / (s * std::sqrt(2.0 * std::numbers::pi));
                const auto [real, h] =
                    trapezoid(12.0 * s, [&](double x) { return norm * std::exp(-0.5 * x * x / (s * s)); });
                const double nyquist = 2.0 * std::numbers::pi / h - t;
                const double alias = 2.0 * std::exp(-0.5 * s * s * nyquist * nyquist);
                const double tail = std::erfc(12.0 / std::numbers::sqrt2);
                return {std::polar(1.0, w.center * t) * real, tail + alias + rounding};
            } else if constexpr (std::is_same_v<W, LorentzianWeight>) {
                const double g = w.hwhm;
                const double half = 1e4 * g;
                const auto [real, h] =
                    trapezoid(half, [&](double x) { return g / (std::numbers::pi * (x * x + g * g)); });
                // 2 (g / pi) int_W^inf cos(x t) / x^2 dx
                double cos_tail = 1.0 / half;
                if (t > 0) {
                    const double z = half * t;
                    cos_tail = std::cos(z) / half - t * (std::numbers::pi / 2.0 - special::sine_integral(z));
                }
                const double correction = 2.0 * g / std::numbers::pi * cos_tail;
                const double residual_tail = 2.0 * g * g * g / (3.0 * std::numbers::pi * half * half * half);
                const double nyquist = 2.0 * std::numbers::pi / h - t;
                const double alias = 2.0 * std::exp(-g * nyquist) / (1.0 - std::exp(-2.0 * std::numbers::pi * g / h));
                const double endpoint = h * h * t * g / (6.0 * std::numbers::pi * half * half);
                return {std::polar(1.0, w.center * t) * (real + correction),
                        residual_tail + alias + endpoint + rounding};
            } else {
                Complex sum{};
                for (double nu : w.samples) {
                    sum += std::polar(1.0, nu * t);
                }
                return {sum / static_cast<double>(w.samples.size()), 0.0};
            }
        },
        dist.weight());
}

namespace detail {

/// Monte Carlo estimate of k at every time in `times`, sharing the same
/// frequency draws across times. Sample j uses stream (seed, label, j).
inline DecoherenceCurve coherence_mc_times(const FrequencyDistribution &dist, const std::vector<double> &times,
                                           double time_scale, const McParams &mc, StreamLabel label) {
    if (mc.n_samples < 1) {
        throw Error(ErrorKind::ConfigError, "Monte Carlo needs at least one sample");
    }
    const std::size_t n = mc.n_samples;
    const std::size_t n_times = times.size();
    const std::size_t n_blocks = (n + kMcBlock - 1) / kMcBlock;

    auto partial = run_blocks(n_blocks, mc.threads, [&](std::size_t block) {
        std::vector<Complex> sums(n_times);
        const std::size_t begin = block * kMcBlock;
        const std::size_t end = std::min(n, begin + kMcBlock);
        for (std::size_t j = begin; j < end; ++j) {
            const double nu = dist.sample(CounterStream(mc.seed, label, j));
            for (std::size_t i = 0; i < n_times; ++i) {
                sums[i] += std::polar(1.0, nu * times[i] * time_scale);
            }
        }
        return sums;
    });

    DecoherenceCurve curve;
    curve.times = times;
    curve.k.resize(n_times);
    for (std::size_t i = 0; i < n_times; ++i) {
        if (times[i] == 0.0) {
            curve.k[i] = {Complex{1.0, 0.0}, 0.0};
            continue;
        }
        Complex total{};
        for (const auto &p : partial) {
            total += p[i];
        }
        const Complex mean = total / static_cast<double>(n);
        // |z_j| = 1, so the sample variance of the complex mean is
        // (1 - |mean|^2) n / (n - 1).
        double se = 0.0;
        if (n > 1) {
            se = std::sqrt(std::max(0.0, 1.0 - std::norm(mean)) / static_cast<double>(n - 1));
        }
        curve.k[i] = {mean, se};
    }
    return curve;
}

}  // namespace detail

/// Ensemble mean of exp(i nu_j t) over `n_samples` draws nu_j ~ dist.
/// Bit-identical for fixed (seed, n_samples) whatever the thread count.
inline CoherenceFactor coherence_mc(const FrequencyDistribution &dist, double t, std::size_t n_samples,
                                    std::uint64_t seed, unsigned threads = 0,
                                    StreamLabel label = StreamLabel::FieldDfs) {
    detail::require_time(t);
    return detail::coherence_mc_times(dist, {t}, 1.0, McParams{n_samples, seed, threads}, label).k.front();
}

namespace detail {

inline DecoherenceCurve coherence_curve(const FrequencyDistribution &dist, const std::vector<double> &times,
                                        double time_scale, const CurveOptions &opts, StreamLabel label) {
    require_grid(times);
    if (opts.method == CoherenceMethod::MonteCarlo) {
        return coherence_mc_times(dist, times, time_scale, opts.mc, label);
    }
    DecoherenceCurve curve;
    curve.times = times;
    curve.k.reserve(times.size());
    for (double t : times) {
        curve.k.push_back(opts.method == CoherenceMethod::Analytic
                              ? coherence_analytic(dist, t * time_scale)
                              : coherence_quadrature(dist, t * time_scale, opts.quadrature_points));
    }
    return curve;
}

}  // namespace detail

/// Coherence factor k(t) = <exp(i nu t)> of the DFS density, nu ~ dist_d.
/// For the equal-amplitude DFS state the visibility is |k(t)|.
inline DecoherenceCurve dfs_visibility_curve(const FrequencyDistribution &dist_d, const std::vector<double> &times,
                                             const CurveOptions &opts = {}) {
    return detail::coherence_curve(dist_d, times, 1.0, opts, StreamLabel::FieldDfs);
}

/// Coherence of the test state (|uu> + |dd>)/sqrt(2). Its two components
/// pick up phases -+omega_m t, so the coherence is the characteristic
/// function of dist_m evaluated at 2t.
inline DecoherenceCurve test_state_visibility_curve(const FrequencyDistribution &dist_m,
                                                    const std::vector<double> &times, const CurveOptions &opts = {}) {
    return detail::coherence_curve(dist_m, times, 2.0, opts, StreamLabel::FieldTest);
}

/// Ensemble-averaged four-level density after time t, with omega_m and
/// omega_d drawn independently per member (draws 0 and 1 of each member's
/// stream). Sums are compensated so constant members average exactly.
inline FourLevelDensity ensemble_density_four(const FourLevelState &state, const FrequencyDistribution &dist_m,
                                              const FrequencyDistribution &dist_d, double t, const McParams &mc) {
    detail::require_time(t);
    if (mc.n_samples < 1) {
        throw Error(ErrorKind::ConfigError, "ensemble needs at least one member");
    }
    struct Acc {
        FourLevelDensity sum{};
        FourLevelDensity comp{};
    };
    const std::size_t n = mc.n_samples;
    const std::size_t n_blocks = (n + detail::kMcBlock - 1) / detail::kMcBlock;
    auto add = [](Complex &sum, Complex &comp, Complex x) {
        auto neumaier = [](double &s, double &c, double v) {
            const double t2 = s + v;
            c += std::abs(s) >= std::abs(v) ? (s - t2) + v : (v - t2) + s;
            s = t2;
        };
        double sr = sum.real(), si = sum.imag(), cr = comp.real(), ci = comp.imag();
        neumaier(sr, cr, x.real());
        neumaier(si, ci, x.imag());
        sum = {sr, si};
        comp = {cr, ci};
    };
    auto partial = run_blocks(n_blocks, mc.threads, [&](std::size_t block) {
        Acc acc;
        const std::size_t begin = block * detail::kMcBlock;
        const std::size_t end = std::min(n, begin + detail::kMcBlock);
        for (std::size_t j = begin; j < end; ++j) {
            const CounterStream stream(mc.seed, StreamLabel::FourLevelEnsemble, j);
            const auto freqs = SpinFrequencies::from_mean_diff(dist_m.sample(stream, 0), dist_d.sample(stream, 1));
            const auto rho = outer(evolve_four_fixed(state, freqs, t));
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    add(acc.sum[a][b], acc.comp[a][b], rho[a][b]);
                }
            }
        }
        return acc;
    });
    Acc total;
    for (const auto &p : partial) {
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                add(total.sum[a][b], total.comp[a][b], p.sum[a][b]);
                add(total.sum[a][b], total.comp[a][b], p.comp[a][b]);
            }
        }
    }
    FourLevelDensity mean{};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            mean[a][b] = (total.sum[a][b] + total.comp[a][b]) / static_cast<double>(n);
        }
    }
    return mean;
}

}  // namespace dfsdecoh
