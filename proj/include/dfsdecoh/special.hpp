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

// Sine integral Si(x) = int_0^x sin(s)/s ds.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace dfsdecoh::special {

inline double sine_integral(double x) {
    const double ax = std::abs(x);
    double si = 0.0;
    if (ax == 0.0) {
        return 0.0;
    }
    if (ax <= 2.0) {
        // Si(x) = sum_n (-1)^n x^(2n+1) / ((2n+1) (2n+1)!)
        double term = ax;  // x^(2n+1)/(2n+1)!
        for (int n = 0; n < 40; ++n) {
            const double contrib = term / (2 * n + 1);
            si += (n % 2 == 0) ? contrib : -contrib;
            if (contrib < std::numeric_limits<double>::epsilon() * std::abs(si)) {
                break;
            }
            term *= ax * ax / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
        }
    } else {
        // Continued fraction for E1(i x) (modified Lentz).
        using C = std::complex<double>;
        constexpr double tiny = 1e-300;
        C b(1.0, ax);
        C c(1.0 / tiny, 0.0);
        C d = 1.0 / b;
        C h = d;
        for (int i = 2; i < 200; ++i) {
            const double a = -static_cast<double>((i - 1) * (i - 1));
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            const C del = c * d;
            h *= del;
            if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) {
                break;
            }
        }
        h *= C(std::cos(ax), -std::sin(ax));
        si = std::numbers::pi / 2.0 + h.imag();
    }
    return x < 0 ? -si : si;
}

}  // namespace dfsdecoh::special
