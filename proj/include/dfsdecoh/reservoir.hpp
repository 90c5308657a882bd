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

// Engineered reservoir: two ions coupled dispersively to one laser mode.
//
// Exact model (hbar = 1, J = sigma_1 + sigma_2):
//   H = (omega / 2) J_z + omega_f a^dag a + g (J_+ a + J_- a^dag)
// Dispersive limit, Omega = g^2 / (2 delta), delta = (omega - omega_f) / 2:
//   H_int ~ Omega [ a a^dag (|u1><u1| + |u2><u2|) - a^dag a (|d1><d1| + |d2><d2|) ]
// so |uu> shifts by 2 Omega (n + 1), |dd> by -2 Omega n and both DFS states
// by Omega regardless of n.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfsdecoh/errors.hpp"
#include "dfsdecoh/fieldnoise.hpp"
#include "dfsdecoh/random.hpp"
#include "dfsdecoh/spinspace.hpp"

namespace dfsdecoh {

class JcParams {
  public:
    JcParams(double g, double omega, double omega_f) : g_(g), omega_(omega), omega_f_(omega_f) {
        if (!std::isfinite(g) || !std::isfinite(omega) || !std::isfinite(omega_f)) {
            throw Error(ErrorKind::ConfigError, "JC parameters must be finite");
        }
        if (omega == omega_f) {
            throw Error(ErrorKind::ConfigError, "detuning delta must be nonzero");
        }
    }

    /// Parameters with the given detuning and omega_f = 0.
    static JcParams from_detuning(double g, double delta) {
        return JcParams(g, 2.0 * delta, 0.0);
    }

    double g() const noexcept {
        return g_;
    }
    double omega() const noexcept {
        return omega_;
    }
    double omega_f() const noexcept {
        return omega_f_;
    }
    double delta() const noexcept {
        return 0.5 * (omega_ - omega_f_);
    }
    /// Dispersive coupling Omega = g^2 / (2 delta).
    double stark() const noexcept {
        return g_ * g_ / (2.0 * delta());
    }

  private:
    double g_;
    double omega_;
    double omega_f_;
};

/// Dispersive Stark shift of a two-ion basis state with n photons.
inline double dispersive_shift(Basis4 config, double n, const JcParams &p) {
    if (!(n >= 0.0)) {
        throw Error(ErrorKind::ConfigError, "photon number must be >= 0");
    }
    const double omega = p.stark();
    switch (config) {
        case Basis4::UpUp: return 2.0 * omega * (n + 1.0);
        case Basis4::DownDown: return -2.0 * omega * n;
        case Basis4::UpDown:
        case Basis4::DownUp: return omega;
    }
    return 0.0;
}

/// g^2 (n_max + 1) / delta^2; the dispersive picture needs this << 1.
inline double check_dispersive_validity(const JcParams &p, std::size_t n_max) {
    const double d = p.delta();
    return p.g() * p.g() * static_cast<double>(n_max + 1) / (d * d);
}

inline constexpr double kValidityWarnRatio = 0.01;

namespace detail {

inline std::array<double, 4> accumulate_dispersive_phases(std::span<const double> trajectory, const JcParams &p,
                                                          double dt) {
    std::array<double, 4> phase{};
    for (double n : trajectory) {
        for (int s = 0; s < 4; ++s) {
            phase[s] += dispersive_shift(static_cast<Basis4>(s), n, p) * dt;
        }
    }
    return phase;
}

}  // namespace detail

/// Evolves under the dispersive Hamiltonian with a piecewise-constant
/// (possibly non-integer) photon number, one entry of `trajectory` per step.
inline FourLevelState evolve_dispersive(const FourLevelState &state, std::span<const double> trajectory,
                                        const JcParams &p, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorKind::ConfigError, "dt must be > 0");
    }
    if (trajectory.empty()) {
        throw Error(ErrorKind::ConfigError, "photon-number trajectory is empty");
    }
    const auto phase = detail::accumulate_dispersive_phases(trajectory, p, dt);
    auto amps = state.amplitudes();
    for (int s = 0; s < 4; ++s) {
        amps[s] *= std::polar(1.0, -phase[s]);
    }
    return FourLevelState(amps);
}

/// Piecewise-constant laser intensity: per step the photon number is
/// max(0, n_mean + n_std * N(0, 1)), i.i.d. across steps of length dt.
struct IntensityNoise {
    double n_mean = 0.0;
    double n_std = 0.0;
    double dt = 1.0;

    void validate() const {
        if (!(n_mean >= 0) || !(n_std >= 0) || !(dt > 0) || !std::isfinite(n_mean) || !std::isfinite(n_std) ||
            !std::isfinite(dt)) {
            throw Error(ErrorKind::ConfigError, "intensity noise needs n_mean >= 0, n_std >= 0, dt > 0");
        }
    }
};

/// The oscillator bath enters only through the rate it induces on the
/// (|uu>, |dd>) coherence in the white-noise limit.
struct BathSummary {
    double gamma = 0.0;
};

/// Phase variance 16 Omega^2 n_std^2 dt t gives |k| = exp(-gamma t) with
/// gamma = 8 Omega^2 n_std^2 dt.
inline BathSummary white_noise_rate(const JcParams &p, const IntensityNoise &noise) {
    noise.validate();
    const double omega = p.stark();
    return {8.0 * omega * omega * noise.n_std * noise.n_std * noise.dt};
}

enum class CoherencePair { Dfs, Test };

inline std::pair<Basis4, Basis4> basis_pair(CoherencePair pair) noexcept {
    return pair == CoherencePair::Dfs ? std::pair{Basis4::UpDown, Basis4::DownUp}
                                      : std::pair{Basis4::UpUp, Basis4::DownDown};
}

/// The pair carrying the larger initial coherence |rho_ij(0)|.
inline CoherencePair dominant_pair(const FourLevelState &state) {
    const double dfs = std::abs(state[Basis4::UpDown] * std::conj(state[Basis4::DownUp]));
    const double test = std::abs(state[Basis4::UpUp] * std::conj(state[Basis4::DownDown]));
    if (dfs < kStateTolerance && test < kStateTolerance) {
        throw Error(ErrorKind::InvalidState, "state carries no (ud,du) or (uu,dd) coherence");
    }
    return dfs >= test ? CoherencePair::Dfs : CoherencePair::Test;
}

struct ReservoirOptions {
    std::optional<CoherencePair> pair;  // defaults to dominant_pair(state)
    unsigned threads = 0;
};

/// Monte Carlo over intensity trajectories. Reports k(t) = <rho_ij(t)> /
/// rho_ij(0) for the selected coherence, with trajectory r drawing its step
/// j photon number from stream (seed, Reservoir, r), draw j.
inline DecoherenceCurve engineered_decoherence_mc(const FourLevelState &state, const IntensityNoise &noise,
                                                  const JcParams &p, const std::vector<double> &times,
                                                  std::size_t n_traj, std::uint64_t seed,
                                                  const ReservoirOptions &opts = {}) {
    noise.validate();
    detail::require_grid(times);
    if (n_traj < 1) {
        throw Error(ErrorKind::ConfigError, "need at least one trajectory");
    }
    const CoherencePair pair = opts.pair.value_or(dominant_pair(state));
    const Basis4 bi = basis_pair(pair).first;
    const Basis4 bj = basis_pair(pair).second;
    if (std::abs(state[bi] * std::conj(state[bj])) < kStateTolerance) {
        throw Error(ErrorKind::InvalidState, "selected coherence is zero in the initial state");
    }

    std::vector<std::size_t> steps(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double m = std::round(times[i] / noise.dt);
        if (std::abs(m * noise.dt - times[i]) > 1e-9 * std::max(1.0, std::abs(times[i])) ||
            m > static_cast<double>(UINT32_MAX)) {
            throw Error(ErrorKind::GridError,
                        "time " + std::to_string(times[i]) + " is not a multiple of dt = " + std::to_string(noise.dt));
        }
        steps[i] = static_cast<std::size_t>(m);
    }

    const std::size_t n_times = times.size();
    constexpr std::size_t kTrajBlock = 256;
    const std::size_t n_blocks = (n_traj + kTrajBlock - 1) / kTrajBlock;
    auto partial = run_blocks(n_blocks, opts.threads, [&](std::size_t block) {
        std::vector<Complex> sums(n_times);
        const std::size_t begin = block * kTrajBlock;
        const std::size_t end = std::min(n_traj, begin + kTrajBlock);
        for (std::size_t r = begin; r < end; ++r) {
            const CounterStream stream(seed, StreamLabel::Reservoir, r);
            double phase_i = 0.0;
            double phase_j = 0.0;
            std::size_t step = 0;
            for (std::size_t i = 0; i < n_times; ++i) {
                for (; step < steps[i]; ++step) {
                    double n = noise.n_mean;
                    if (noise.n_std > 0) {
                        n = std::max(0.0, noise.n_mean + noise.n_std * stream.normal(static_cast<std::uint32_t>(step)));
                    }
                    phase_i += dispersive_shift(bi, n, p) * noise.dt;
                    phase_j += dispersive_shift(bj, n, p) * noise.dt;
                }
                sums[i] += std::polar(1.0, -(phase_i - phase_j));
            }
        }
        return sums;
    });

    DecoherenceCurve curve;
    curve.times = times;
    curve.k.resize(n_times);
    for (std::size_t i = 0; i < n_times; ++i) {
        Complex total{};
        for (const auto &s : partial) {
            total += s[i];
        }
        const Complex mean = total / static_cast<double>(n_traj);
        double se = 0.0;
        if (n_traj > 1) {
            se = std::sqrt(std::max(0.0, 1.0 - std::norm(mean)) / static_cast<double>(n_traj - 1));
        }
        curve.k[i] = {mean, se};
    }
    return curve;
}

/// Two-ion spin state times a truncated Fock space, index s * (n_max + 1) + n
/// with s in the four-level order.
class FockRegister {
  public:
    FockRegister(std::size_t n_max, std::vector<Complex> amplitudes, double tolerance = 1e-10)
        : n_max_(n_max), amps_(std::move(amplitudes)) {
        if (n_max < 1) {
            throw Error(ErrorKind::ConfigError, "Fock truncation needs n_max >= 1");
        }
        if (amps_.size() != 4 * (n_max + 1)) {
            throw Error(ErrorKind::InvalidState, "amplitude count does not match 4 (n_max + 1)");
        }
        double n2 = 0.0;
        for (const auto &a : amps_) {
            if (!is_finite(a)) {
                throw Error(ErrorKind::InvalidState, "non-finite Fock amplitude");
            }
            n2 += std::norm(a);
        }
        if (std::abs(n2 - 1.0) > tolerance) {
            throw Error(ErrorKind::InvalidState, "Fock register not normalized");
        }
    }

    /// spin state (x) |n>.
    static FockRegister product(const FourLevelState &spin, std::size_t n, std::size_t n_max) {
        if (n > n_max) {
            throw Error(ErrorKind::ConfigError, "photon number exceeds truncation");
        }
        std::vector<Complex> amps(4 * (n_max + 1));
        for (int s = 0; s < 4; ++s) {
            amps[s * (n_max + 1) + n] = spin.amplitudes()[s];
        }
        return FockRegister(n_max, std::move(amps));
    }

    std::size_t n_max() const noexcept {
        return n_max_;
    }
    std::size_t dim() const noexcept {
        return amps_.size();
    }
    std::size_t index(Basis4 s, std::size_t n) const noexcept {
        return static_cast<std::size_t>(s) * (n_max_ + 1) + n;
    }
    Complex amplitude(Basis4 s, std::size_t n) const noexcept {
        return amps_[index(s, n)];
    }
    const std::vector<Complex> &amplitudes() const noexcept {
        return amps_;
    }
    double norm() const noexcept {
        double n2 = 0.0;
        for (const auto &a : amps_) {
            n2 += std::norm(a);
        }
        return std::sqrt(n2);
    }
    double top_occupancy() const noexcept {
        double occ = 0.0;
        for (int s = 0; s < 4; ++s) {
            occ += std::norm(amps_[s * (n_max_ + 1) + n_max_]);
        }
        return occ;
    }

  private:
    std::size_t n_max_;
    std::vector<Complex> amps_;
};

inline constexpr double kJcNormTolerance = 1e-10;
/// Largest accepted change between a step and its halving.
inline constexpr double kJcStepTolerance = 1e-10;
inline constexpr double kFockOverflowLimit = 1e-6;

namespace detail {

/// Half the J_z eigenvalue: +1, 0, 0, -1.
inline int half_jz(int spin) noexcept {
    return spin == 0 ? 1 : (spin == 3 ? -1 : 0);
}

/// Dense square complex matrix, row-major.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<Complex> a;

    explicit DenseMatrix(std::size_t dim) : n(dim), a(dim * dim) {
    }
    Complex &operator()(std::size_t i, std::size_t j) {
        return a[i * n + j];
    }
    Complex operator()(std::size_t i, std::size_t j) const {
        return a[i * n + j];
    }
};

inline DenseMatrix multiply(const DenseMatrix &x, const DenseMatrix &y) {
    DenseMatrix r(x.n);
    for (std::size_t i = 0; i < x.n; ++i) {
        for (std::size_t k = 0; k < x.n; ++k) {
            const Complex xik = x(i, k);
            if (xik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < x.n; ++j) {
                r(i, j) += xik * y(k, j);
            }
        }
    }
    return r;
}

inline std::vector<Complex> matvec(const DenseMatrix &m, const std::vector<Complex> &v) {
    std::vector<Complex> r(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        Complex s{};
        for (std::size_t j = 0; j < m.n; ++j) {
            s += m(i, j) * v[j];
        }
        r[i] = s;
    }
    return r;
}

/// delta J_z + g (J_+ a + J_- a^dag): the Hamiltonian in the frame rotating
/// with omega_f N, N = a^dag a + J_z / 2 (conserved).
inline DenseMatrix rotating_frame_hamiltonian(std::size_t n_max, const JcParams &p) {
    const std::size_t levels = n_max + 1;
    DenseMatrix h(4 * levels);
    auto idx = [levels](int s, std::size_t n) { return static_cast<std::size_t>(s) * levels + n; };
    for (int s = 0; s < 4; ++s) {
        for (std::size_t n = 0; n < levels; ++n) {
            h(idx(s, n), idx(s, n)) = 2.0 * p.delta() * half_jz(s);
        }
    }
    // J_+ raises one ion: dd -> ud, du; ud -> uu; du -> uu.
    const std::array<std::pair<int, int>, 4> raises{{{3, 1}, {3, 2}, {1, 0}, {2, 0}}};
    for (const auto &[from, to] : raises) {
        for (std::size_t n = 1; n < levels; ++n) {
            // <to, n-1| g J_+ a |from, n> = g sqrt(n)
            const double element = p.g() * std::sqrt(static_cast<double>(n));
            h(idx(to, n - 1), idx(from, n)) += element;
            h(idx(from, n), idx(to, n - 1)) += element;
        }
    }
    return h;
}

/// E such that I + E is the classical RK4 step for psi' = -i H psi.
inline DenseMatrix rk4_increment(const DenseMatrix &h, double step) {
    DenseMatrix z(h.n);
    for (std::size_t i = 0; i < h.a.size(); ++i) {
        z.a[i] = Complex{0.0, -step} * h.a[i];
    }
    // E = z + z^2/2 + z^3/6 + z^4/24 = z (I + z/2 (I + z/3 (I + z/4)))
    DenseMatrix inner = z;
    for (auto &x : inner.a) {
        x /= 4.0;
    }
    for (std::size_t i = 0; i < h.n; ++i) {
        inner(i, i) += 1.0;
    }
    for (double div : {3.0, 2.0}) {
        DenseMatrix next = multiply(z, inner);
        for (auto &x : next.a) {
            x /= div;
        }
        for (std::size_t i = 0; i < h.n; ++i) {
            next(i, i) += 1.0;
        }
        inner = std::move(next);
    }
    return multiply(z, inner);
}

/// (I + E)^m psi by repeated squaring, carrying only the increment
/// (I + E)^2 = I + (2E + E^2) so the identity never swamps rounding.
inline std::vector<Complex> power_apply(DenseMatrix e, std::uint64_t m, std::vector<Complex> psi) {
    while (m > 0) {
        if (m & 1u) {
            const auto delta = matvec(e, psi);
            for (std::size_t i = 0; i < psi.size(); ++i) {
                psi[i] += delta[i];
            }
        }
        m >>= 1;
        if (m > 0) {
            DenseMatrix sq = multiply(e, e);
            for (std::size_t i = 0; i < e.a.size(); ++i) {
                sq.a[i] += 2.0 * e.a[i];
            }
            e = std::move(sq);
        }
    }
    return psi;
}

}  // namespace detail

/// Exact evolution of the truncated Jaynes-Cummings model by fixed-step
/// classical RK4. The step starts at `dt_int` and is halved until the norm
/// drift over [0, t] is below kJcNormTolerance and halving the step moves
/// the final state by less than kJcStepTolerance.
inline FockRegister full_jc_evolve(const FockRegister &reg, const JcParams &p, double t, double dt_int) {
    detail::require_time(t);
    if (!(dt_int > 0) || !std::isfinite(dt_int)) {
        throw Error(ErrorKind::ConfigError, "integration step must be > 0");
    }
    if (reg.top_occupancy() >= kFockOverflowLimit) {
        throw Error(ErrorKind::FockOverflow, "initial state occupies the top Fock level");
    }
    const std::size_t n_max = reg.n_max();
    const std::size_t levels = n_max + 1;

    std::vector<Complex> psi = reg.amplitudes();
    if (t > 0) {
        const auto h = detail::rotating_frame_hamiltonian(n_max, p);
        auto steps = static_cast<std::uint64_t>(std::ceil(t / dt_int));
        auto propagate = [&](std::uint64_t m) {
            return detail::power_apply(detail::rk4_increment(h, t / static_cast<double>(m)), m, reg.amplitudes());
        };
        std::vector<Complex> coarse = propagate(steps);
        bool converged = false;
        for (int refine = 0; refine < 40; ++refine) {
            steps *= 2;
            auto fine = propagate(steps);
            double n2 = 0.0;
            double diff2 = 0.0;
            for (std::size_t i = 0; i < fine.size(); ++i) {
                n2 += std::norm(fine[i]);
                diff2 += std::norm(fine[i] - coarse[i]);
            }
            if (std::abs(std::sqrt(n2) - reg.norm()) <= kJcNormTolerance && std::sqrt(diff2) <= kJcStepTolerance) {
                psi = std::move(fine);
                converged = true;
                break;
            }
            coarse = std::move(fine);
        }
        if (!converged) {
            throw Error(ErrorKind::ResolutionError, "RK4 step refinement did not reach the norm tolerance");
        }
        // Undo the rotating frame: exp(-i omega_f N t).
        for (int s = 0; s < 4; ++s) {
            for (std::size_t n = 0; n < levels; ++n) {
                const double excitations = static_cast<double>(n) + detail::half_jz(s);
                psi[s * levels + n] *= std::polar(1.0, -p.omega_f() * excitations * t);
            }
        }
    }
    FockRegister out(n_max, std::move(psi), 2.0 * kJcNormTolerance + 1e-12);
    if (out.top_occupancy() >= kFockOverflowLimit) {
        throw Error(ErrorKind::FockOverflow, "top Fock level occupancy " + std::to_string(out.top_occupancy()) +
                                                 " exceeds " + std::to_string(kFockOverflowLimit));
    }
    return out;
}

/// Free energy of |s, n> under H0 = (omega / 2) J_z + omega_f a^dag a.
inline double free_energy(Basis4 s, std::size_t n, const JcParams &p) noexcept {
    return p.omega() * detail::half_jz(static_cast<int>(s)) + p.omega_f() * static_cast<double>(n);
}

/// Amplitude of |s, n> with the free phase exp(-i E0 t) removed, for direct
/// comparison with the dispersive shifts.
inline Complex interaction_picture_amplitude(const FockRegister &reg, Basis4 s, std::size_t n, const JcParams &p,
                                             double t) {
    return reg.amplitude(s, n) * std::polar(1.0, free_energy(s, n, p) * t);
}

}  // namespace dfsdecoh
