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

// Two-ion spin states restricted to the decoherence-free subspace
// span{|ud>, |du>} and the full four-level space, plus Bloch geometry.
//
// Basis orderings used everywhere in the library:
//   DFS pair:    index 0 = |ud>, index 1 = |du>
//   four-level:  |uu>, |ud>, |du>, |dd>   (u = spin up, d = spin down)

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "dfsdecoh/errors.hpp"

namespace dfsdecoh {

using Complex = std::complex<double>;

inline constexpr double kStateTolerance = 1e-12;

inline bool is_finite(Complex z) noexcept {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

enum class Basis4 : int { UpUp = 0, UpDown = 1, DownUp = 2, DownDown = 3 };

inline const char *to_string(Basis4 b) {
    switch (b) {
        case Basis4::UpUp: return "uu";
        case Basis4::UpDown: return "ud";
        case Basis4::DownUp: return "du";
        case Basis4::DownDown: return "dd";
    }
    return "?";
}

/// Normalized pure state alpha|ud> + beta|du>.
class DfsPureState {
  public:
    DfsPureState(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta) {
        if (!is_finite(alpha) || !is_finite(beta)) {
            throw Error(ErrorKind::InvalidState, "non-finite DFS amplitude");
        }
        const double norm2 = std::norm(alpha) + std::norm(beta);
        if (std::abs(norm2 - 1.0) > kStateTolerance) {
            throw Error(ErrorKind::InvalidState, "DFS amplitudes not normalized (|a|^2+|b|^2 = " +
                                                     std::to_string(norm2) + ")");
        }
    }

    Complex alpha() const noexcept {
        return alpha_;
    }
    Complex beta() const noexcept {
        return beta_;
    }

  private:
    Complex alpha_;
    Complex beta_;
};

/// 2x2 density matrix on a two-level subspace. Stores the populations and
/// rho01 = <0|rho|1>; rho10 is its conjugate.
class DfsDensity {
  public:
    DfsDensity(double pop0, double pop1, Complex rho01) : pop0_(pop0), pop1_(pop1), rho01_(rho01) {
        if (!std::isfinite(pop0) || !std::isfinite(pop1) || !is_finite(rho01)) {
            throw Error(ErrorKind::InvalidState, "non-finite density entry");
        }
        if (pop0 < -kStateTolerance || pop1 < -kStateTolerance || pop0 > 1 + kStateTolerance ||
            pop1 > 1 + kStateTolerance) {
            throw Error(ErrorKind::InvalidState, "population outside [0, 1]");
        }
        if (std::abs(pop0 + pop1 - 1.0) > kStateTolerance) {
            throw Error(ErrorKind::InvalidState, "density trace differs from 1");
        }
        if (std::norm(rho01) > pop0 * pop1 + kStateTolerance) {
            throw Error(ErrorKind::InvalidState, "density matrix not positive semidefinite");
        }
    }

    double pop_updown() const noexcept {
        return pop0_;
    }
    double pop_downup() const noexcept {
        return pop1_;
    }
    Complex rho01() const noexcept {
        return rho01_;
    }
    Complex rho10() const noexcept {
        return std::conj(rho01_);
    }
    double trace() const noexcept {
        return pop0_ + pop1_;
    }

  private:
    double pop0_;
    double pop1_;
    Complex rho01_;
};

class FourLevelState {
  public:
    using Amplitudes = std::array<Complex, 4>;

    explicit FourLevelState(const Amplitudes &amps) : amps_(amps) {
        double norm2 = 0.0;
        for (const auto &a : amps) {
            if (!is_finite(a)) {
                throw Error(ErrorKind::InvalidState, "non-finite four-level amplitude");
            }
            norm2 += std::norm(a);
        }
        if (std::abs(norm2 - 1.0) > kStateTolerance) {
            throw Error(ErrorKind::InvalidState, "four-level state not normalized");
        }
    }

    const Amplitudes &amplitudes() const noexcept {
        return amps_;
    }
    Complex operator[](Basis4 b) const noexcept {
        return amps_[static_cast<int>(b)];
    }
    double norm() const noexcept {
        double n2 = 0.0;
        for (const auto &a : amps_) {
            n2 += std::norm(a);
        }
        return std::sqrt(n2);
    }

  private:
    Amplitudes amps_;
};

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const noexcept {
        return std::sqrt(x * x + y * y + z * z);
    }
    double cylindrical_radius() const noexcept {
        return std::hypot(x, y);
    }
};

/// Ensemble-averaged DFS density for initial amplitudes (alpha, beta) and
/// coherence factor k: diagonal (|alpha|^2, |beta|^2), rho10 = k alpha beta*,
/// rho01 = k* alpha* beta.
inline DfsDensity density_from_coherence(Complex alpha, Complex beta, Complex k) {
    const DfsPureState state(alpha, beta);
    if (!is_finite(k) || std::abs(k) > 1.0 + kStateTolerance) {
        throw Error(ErrorKind::InvalidCoherenceFactor, "|k| = " + std::to_string(std::abs(k)) + " exceeds 1");
    }
    const Complex rho10 = k * state.alpha() * std::conj(state.beta());
    return DfsDensity(std::norm(state.alpha()), std::norm(state.beta()), std::conj(rho10));
}

inline DfsDensity density_from_coherence(const DfsPureState &state, Complex k) {
    return density_from_coherence(state.alpha(), state.beta(), k);
}

/// Bloch vector with z = pop0 - pop1 and x + i y = 2 conj(rho01) = 2 rho10,
/// i.e. rho = (I + x X + y Y + z Z) / 2 in the (|ud>, |du>) basis.
inline BlochVector bloch(const DfsDensity &rho) noexcept {
    const Complex xy = 2.0 * rho.rho10();
    return {xy.real(), xy.imag(), rho.pop_updown() - rho.pop_downup()};
}

/// Visibility of the best interferometer: the Bloch-vector norm.
inline double visibility(const DfsDensity &rho) noexcept {
    return std::min(1.0, bloch(rho).norm());
}

struct DfsProjection {
    DfsPureState state;
    double weight;
};

/// Normalized restriction of a four-level state onto span{|ud>, |du>}.
inline DfsProjection dfs_project(const FourLevelState &state) {
    const Complex ud = state[Basis4::UpDown];
    const Complex du = state[Basis4::DownUp];
    const double weight = std::norm(ud) + std::norm(du);
    if (weight < kStateTolerance) {
        throw Error(ErrorKind::NotInSubspace, "state has no weight in the DFS");
    }
    const double scale = 1.0 / std::sqrt(weight);
    // Renormalize exactly so the DfsPureState check never trips on rounding.
    Complex a = ud * scale;
    Complex b = du * scale;
    const double fix = 1.0 / std::sqrt(std::norm(a) + std::norm(b));
    return {DfsPureState(a * fix, b * fix), weight};
}

inline FourLevelState embed(const DfsPureState &s) {
    return FourLevelState({Complex{}, s.alpha(), s.beta(), Complex{}});
}

/// (|ud> + |du>) / sqrt(2).
inline FourLevelState dfs_equal_state() {
    const double r = std::numbers::sqrt2 / 2.0;
    return FourLevelState({Complex{}, r, r, Complex{}});
}

/// (|uu> + |dd>) / sqrt(2), the state outside the DFS used as a probe of
/// collective dephasing.
inline FourLevelState test_state() {
    const double r = std::numbers::sqrt2 / 2.0;
    return FourLevelState({r, Complex{}, Complex{}, r});
}

/// Full 4x4 density matrix, row-major in the four-level basis.
using FourLevelDensity = std::array<std::array<Complex, 4>, 4>;

inline FourLevelDensity outer(const FourLevelState &s) noexcept {
    FourLevelDensity rho{};
    const auto &a = s.amplitudes();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            rho[i][j] = a[i] * std::conj(a[j]);
        }
    }
    return rho;
}

/// Two-level block {i, j} of a four-level density matrix, renormalized to
/// unit trace.
inline DfsDensity subspace_density(const FourLevelDensity &rho, Basis4 i, Basis4 j) {
    const int a = static_cast<int>(i);
    const int b = static_cast<int>(j);
    const double p0 = rho[a][a].real();
    const double p1 = rho[b][b].real();
    const double tr = p0 + p1;
    if (tr < kStateTolerance) {
        throw Error(ErrorKind::NotInSubspace, std::string("no weight in block {") + to_string(i) + "," +
                                                  to_string(j) + "}");
    }
    return DfsDensity(p0 / tr, p1 / tr, rho[a][b] / tr);
}

}  // namespace dfsdecoh
