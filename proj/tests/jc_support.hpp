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

// Exact-versus-dispersive comparison for the test state (|uu> + |dd>)/sqrt(2)
// in Fock state |n>, shared by the unit and acceptance suites.

#include <cmath>
#include <numbers>
#include <vector>

#include "dfsdecoh/reservoir.hpp"

namespace dfsdecoh::jccheck {

struct PhaseComparison {
    double max_phase_error = 0.0;       // max_t |phi_exact - phi_dispersive|
    double final_dispersive_phase = 0.0;  // |phi_dispersive| at Omega t = pi
    double max_population_error = 0.0;
    double max_norm_error = 0.0;

    double relative_phase_error() const {
        return max_phase_error / final_dispersive_phase;
    }
};

inline double unwrap_near(double phase, double reference) {
    const double two_pi = 2.0 * std::numbers::pi;
    return phase + two_pi * std::round((reference - phase) / two_pi);
}

/// Samples Omega t over [0, pi] and compares the (uu, dd) relative phase
/// and populations of the exact truncated JC evolution (interaction picture)
/// with the dispersive prediction.
inline PhaseComparison compare_exact_to_dispersive(const JcParams &p, std::size_t n, int samples_per_cycle = 16) {
    const std::size_t n_max = n + 3;
    const auto start = FockRegister::product(test_state(), n, n_max);
    const double horizon = std::numbers::pi / std::abs(p.stark());
    const int samples = samples_per_cycle * static_cast<int>(2 * n + 1);
    const double dt_int = 0.05 / (2.0 * std::abs(p.delta()) + p.g() * std::sqrt(double(n + 3)));

    PhaseComparison out;
    double last_exact = 0.0;
    double last_disp = 0.0;
    for (int k = 1; k <= samples; ++k) {
        const double t = horizon * k / samples;
        const auto reg = full_jc_evolve(start, p, t, dt_int);
        const Complex uu = interaction_picture_amplitude(reg, Basis4::UpUp, n, p, t);
        const Complex dd = interaction_picture_amplitude(reg, Basis4::DownDown, n, p, t);
        const double exact = unwrap_near(std::arg(uu * std::conj(dd)), last_exact);

        const std::vector<double> trajectory{static_cast<double>(n)};
        const auto disp_state = evolve_dispersive(test_state(), trajectory, p, t);
        const double disp =
            unwrap_near(std::arg(disp_state[Basis4::UpUp] * std::conj(disp_state[Basis4::DownDown])), last_disp);

        last_exact = exact;
        last_disp = disp;
        out.max_phase_error = std::max(out.max_phase_error, std::abs(exact - disp));
        out.max_population_error = std::max({out.max_population_error, std::abs(std::norm(uu) - 0.5),
                                             std::abs(std::norm(dd) - 0.5)});
        out.max_norm_error = std::max(out.max_norm_error, std::abs(reg.norm() - 1.0));
        if (k == samples) {
            out.final_dispersive_phase = std::abs(disp);
        }
    }
    return out;
}

/// Detuning giving g^2 (n + 1) / delta^2 = ratio.
inline JcParams params_for_ratio(double g, std::size_t n, double ratio) {
    return JcParams::from_detuning(g, g * std::sqrt(static_cast<double>(n + 1) / ratio));
}

}  // namespace dfsdecoh::jccheck
