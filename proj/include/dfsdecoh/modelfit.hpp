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

// Discrimination between exponential and Gaussian visibility decay.
//
// Both families are two-parameter least-squares fits of F(t) = ln V(t):
//   exponential decay:  F = a t + b
//   Gaussian decay:     F = A t^2 + B
// The family with the smaller accumulated square distance (asd, the sum of
// squared vertical residuals) wins.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfsdecoh/errors.hpp"
#include "dfsdecoh/random.hpp"

namespace dfsdecoh {

struct VisibilityPoint {
    double t = 0.0;
    double v = 1.0;
    std::optional<double> err;
    std::size_t line = 0;  // source line, 0 if not read from a file
};

inline constexpr double kVisibilityCeiling = 1.0 + 1e-9;

struct VisibilityDataset {
    std::vector<VisibilityPoint> points;
    std::string label;

    std::size_t size() const noexcept {
        return points.size();
    }

    /// Throws OrderError / RangeError naming the offending point.
    void validate() const {
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto &p = points[i];
            const std::string where = p.line ? "line " + std::to_string(p.line) : "point " + std::to_string(i);
            if (!std::isfinite(p.t)) {
                throw Error(ErrorKind::RangeError, where + ": time is not finite", p.line);
            }
            if (!(p.v > 0.0) || !(p.v <= kVisibilityCeiling)) {
                throw Error(ErrorKind::RangeError, where + ": visibility " + std::to_string(p.v) + " outside (0, 1]",
                            p.line);
            }
            if (p.err && (!(*p.err >= 0.0) || !std::isfinite(*p.err))) {
                throw Error(ErrorKind::RangeError, where + ": visibility error must be >= 0", p.line);
            }
            if (i > 0 && !(p.t > points[i - 1].t)) {
                throw Error(ErrorKind::OrderError, where + ": times must be strictly increasing", p.line);
            }
        }
    }
};

struct LogPoint {
    double t = 0.0;
    double f = 0.0;
};

enum class DecayFamily { ExponentialDecay, GaussianDecay };

inline const char *to_string(DecayFamily f) {
    return f == DecayFamily::ExponentialDecay ? "ExponentialDecay" : "GaussianDecay";
}

/// p0 is the intercept (b or B), p1 the coefficient of t or t^2 (a or A).
struct FitResult {
    DecayFamily family = DecayFamily::ExponentialDecay;
    double p0 = 0.0;
    double p1 = 0.0;
    double asd = 0.0;

    double regressor(double t) const noexcept {
        return family == DecayFamily::ExponentialDecay ? t : t * t;
    }
    double model(double t) const noexcept {
        return p0 + p1 * regressor(t);
    }
};

enum class Winner { ExponentialDecay, GaussianDecay, Tie };

inline const char *to_string(Winner w) {
    switch (w) {
        case Winner::ExponentialDecay: return "ExponentialDecay";
        case Winner::GaussianDecay: return "GaussianDecay";
        case Winner::Tie: return "Tie";
    }
    return "?";
}

struct SieveVerdict {
    Winner winner = Winner::Tie;
    double asd_exp = 0.0;
    double asd_gauss = 0.0;
    double margin = 0.0;
};

struct SieveOutcome {
    FitResult exponential;
    FitResult gaussian;
    SieveVerdict verdict;
};

inline constexpr double kDefaultTieThreshold = 0.02;

inline std::vector<LogPoint> log_transform(const VisibilityDataset &ds) {
    std::vector<LogPoint> out;
    out.reserve(ds.points.size());
    for (std::size_t i = 0; i < ds.points.size(); ++i) {
        const auto &p = ds.points[i];
        if (!(p.v > 0.0)) {
            const std::string where = p.line ? "line " + std::to_string(p.line) : "point " + std::to_string(i);
            throw Error(ErrorKind::NonPositiveVisibility, where + ": visibility " + std::to_string(p.v) + " <= 0",
                        p.line);
        }
        out.push_back({p.t, std::log(p.v)});
    }
    return out;
}

namespace detail {

/// Ordinary least squares of f on one regressor plus intercept, centered
/// for conditioning.
inline FitResult ols(std::span<const LogPoint> pts, DecayFamily family) {
    FitResult fit;
    fit.family = family;
    if (pts.size() < 2) {
        throw Error(ErrorKind::DegenerateDesign, "need at least two points");
    }
    const double x0 = fit.regressor(pts.front().t);
    bool distinct = false;
    double xbar = 0.0;
    double fbar = 0.0;
    for (const auto &p : pts) {
        const double x = fit.regressor(p.t);
        distinct = distinct || x != x0;
        xbar += x;
        fbar += p.f;
    }
    if (!distinct) {
        throw Error(ErrorKind::DegenerateDesign,
                    std::string("all regressor values coincide for ") + to_string(family));
    }
    const auto n = static_cast<double>(pts.size());
    xbar /= n;
    fbar /= n;
    double sxx = 0.0;
    double sxf = 0.0;
    for (const auto &p : pts) {
        const double dx = fit.regressor(p.t) - xbar;
        sxx += dx * dx;
        sxf += dx * (p.f - fbar);
    }
    fit.p1 = sxf / sxx;
    fit.p0 = fbar - fit.p1 * xbar;
    double asd = 0.0;
    for (const auto &p : pts) {
        const double r = p.f - fit.model(p.t);
        asd += r * r;
    }
    // Two points with distinct regressors are interpolated exactly.
    fit.asd = pts.size() == 2 ? 0.0 : asd;
    return fit;
}

}  // namespace detail

/// Best line F = a t + b.
inline FitResult fit_linear(std::span<const LogPoint> pts) {
    return detail::ols(pts, DecayFamily::ExponentialDecay);
}

/// Best pure parabola F = A t^2 + B (no linear term).
inline FitResult fit_quadratic_pure(std::span<const LogPoint> pts) {
    return detail::ols(pts, DecayFamily::GaussianDecay);
}

/// Decision rule on a pair of accumulated square distances. The smaller asd
/// wins unless the relative margin is below `tie_threshold`; a threshold of
/// 0 gives the strict rule (only exact equality ties).
inline SieveVerdict decide(double asd_exp, double asd_gauss, double tie_threshold = kDefaultTieThreshold) {
    if (!(asd_exp >= 0) || !(asd_gauss >= 0)) {
        throw Error(ErrorKind::ConfigError, "asd values must be >= 0");
    }
    if (!(tie_threshold >= 0) || !std::isfinite(tie_threshold)) {
        throw Error(ErrorKind::ConfigError, "tie threshold must be finite and >= 0");
    }
    SieveVerdict v;
    v.asd_exp = asd_exp;
    v.asd_gauss = asd_gauss;
    const double largest = std::max(asd_exp, asd_gauss);
    v.margin = largest > 0 ? std::abs(asd_exp - asd_gauss) / largest : 0.0;
    if (asd_exp == asd_gauss || v.margin < tie_threshold) {
        v.winner = Winner::Tie;
    } else {
        v.winner = asd_exp < asd_gauss ? Winner::ExponentialDecay : Winner::GaussianDecay;
    }
    return v;
}

inline SieveOutcome sieve(const VisibilityDataset &ds, double tie_threshold = kDefaultTieThreshold) {
    ds.validate();
    if (ds.size() < 3) {
        throw Error(ErrorKind::DegenerateDesign, "the sieve needs at least three points");
    }
    const auto pts = log_transform(ds);
    SieveOutcome out{fit_linear(pts), fit_quadratic_pure(pts), {}};
    out.verdict = decide(out.exponential.asd, out.gaussian.asd, tie_threshold);
    return out;
}

/// Noisy samples of one decay family: F_i = p0 + p1 x(t_i) + noise_std z_i,
/// z_i standard normal from stream (seed, Synthetic, i), V_i = exp(F_i).
inline VisibilityDataset generate_synthetic(DecayFamily family, double p0, double p1,
                                            const std::vector<double> &times, double noise_std,
                                            std::uint64_t seed) {
    if (!(noise_std >= 0) || !std::isfinite(noise_std) || !std::isfinite(p0) || !std::isfinite(p1)) {
        throw Error(ErrorKind::ConfigError, "synthetic parameters must be finite, noise_std >= 0");
    }
    const FitResult model{family, p0, p1, 0.0};
    VisibilityDataset ds;
    ds.label = std::string("synthetic ") + to_string(family);
    ds.points.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        double f = model.model(times[i]);
        if (noise_std > 0) {
            f += noise_std * CounterStream(seed, StreamLabel::Synthetic, i).normal(0);
        }
        const double v = std::exp(f);
        if (!(v > 0.0) || v > 1.0) {
            throw Error(ErrorKind::RangeError, "generated visibility " + std::to_string(v) + " at t = " +
                                                   std::to_string(times[i]) + " outside (0, 1]");
        }
        ds.points.push_back({times[i], v, std::nullopt, 0});
    }
    ds.validate();
    return ds;
}

}  // namespace dfsdecoh
