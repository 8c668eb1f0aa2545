// Copyright 2026 The bettiq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <functional>

#include "bettiq/common.hpp"

namespace bettiq {

/// Power-to-Chebyshev moment conversion is numerically safe only up to
/// this degree: the monomial coefficients of T_j grow as 2^j and the
/// conversion cancels catastrophically beyond it. Higher-degree runs
/// switch to the operator recurrence.
inline constexpr int kPowerConversionCap = 30;

/// Affine map from an operator spectrum interval onto the Chebyshev
/// domain [-1, 1]. The pipeline always scales spectra into [0, 1] first.
struct ChebDomain {
    double lo = 0.0;
    double hi = 1.0;

    double to_cheb(double x) const { return 2.0 * (x - lo) / (hi - lo) - 1.0; }
};

/// Truncated Chebyshev series c_0 T_0 + ... + c_m T_m on [-1, 1], carried
/// together with the spectrum-to-domain map.
struct ChebSeries {
    int m = 0;
    std::vector<double> coeffs;
    ChebDomain domain;

    /// Clenshaw evaluation at y in [-1, 1].
    double eval_cheb_var(double y) const {
        double b0 = 0.0, b1 = 0.0;
        for (int j = m; j >= 1; --j) {
            double next = 2.0 * y * b0 - b1 + coeffs[j];
            b1 = b0;
            b0 = next;
        }
        return y * b0 - b1 + coeffs[0];
    }

    /// Evaluation at a point of the operator spectrum.
    double eval(double x) const { return eval_cheb_var(domain.to_cheb(x)); }
};

/// Closed-form expansion coefficients of the indicator of [a, b] in
/// [-1, 1]: c_0 = (acos a - acos b)/pi, c_j = (2/pi)(sin(j acos a) -
/// sin(j acos b))/j.
inline ChebSeries step_coefficients(int m, double a, double b) {
    require(m >= 0, "degree must be >= 0");
    require(a >= -1.0 && a < b && b <= 1.0, "invalid step interval");
    ChebSeries s;
    s.m = m;
    s.coeffs.resize(m + 1);
    const double ta = std::acos(a);
    const double tb = std::acos(b);
    s.coeffs[0] = (ta - tb) / M_PI;
    for (int j = 1; j <= m; ++j)
        s.coeffs[j] = (2.0 / M_PI) * (std::sin(j * ta) - std::sin(j * tb)) / j;
    return s;
}

/// Analytic step surrogate f(x) = (1 + tanh(alpha (x - delta/2)))/2 with
/// alpha = log(2/epsilon)/delta; used in analysis and tests only.
inline std::function<double(double)> tanh_surrogate(double delta, double epsilon) {
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
    require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
    const double alpha = std::log(2.0 / epsilon) / delta;
    const double mid = 0.5 * delta;
    return [alpha, mid](double x) { return 0.5 * (1.0 + std::tanh(alpha * (x - mid))); };
}

/// Smallest degree m with
///   m >= log(32 log(2/eps) / (pi delta eps)) / log(1 + pi delta / (4 log(2/eps))),
/// natural logs throughout.
inline int degree_bound(double delta, double epsilon) {
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
    require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
    const double l2e = std::log(2.0 / epsilon);
    const double num = std::log(32.0 * l2e / (M_PI * delta * epsilon));
    const double den = std::log1p(M_PI * delta / (4.0 * l2e));
    return std::max(1, static_cast<int>(std::ceil(num / den)));
}

/// Probe count ceil(c_nv r^2 log(2/eta) / eps^2), r the diagonal bound of
/// the scaled operator (1 after scaling).
inline int probe_bound(double eta, double epsilon, double c_nv, double r = 1.0) {
    require(eta > 0.0 && eta < 1.0, "eta must lie in (0,1)");
    require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
    require(c_nv > 0.0, "c_nv must be positive");
    const double raw = c_nv * r * r * std::log(2.0 / eta) / (epsilon * epsilon);
    return std::max(1, static_cast<int>(std::ceil(raw)));
}

namespace detail {

/// g(j, i) = C(2i,i) C(j,2i) / C(j-1,i); always an integer for j >= 2.
inline std::uint64_t cheb_sum_g(int j, int i) {
    const std::uint64_t num_a = binomial(2 * i, i);
    const std::uint64_t num_b = binomial(j, 2 * i);
    const std::uint64_t den = binomial(j - 1, i);
    const unsigned __int128 num = static_cast<unsigned __int128>(num_a) * num_b;
    require(den != 0 && num % den == 0, "degenerate g(j,i)");
    return static_cast<std::uint64_t>(num / den);
}

}  // namespace detail

/// Chebyshev moment from power moments of the same variable:
///   theta^(j) = sum_i (-1)^i 2^(j-2i-1) g(j,i) mu^(j-2i),
/// with theta^(0) = mu^(0) and theta^(1) = mu^(1). Accumulated in extended
/// precision; *slack, when given, receives the round-off bound of the
/// cancelling sum.
inline double cheb_from_power(std::span<const double> mu, int j, double* slack = nullptr) {
    require(j >= 0, "degree must be >= 0");
    require(static_cast<int>(mu.size()) > j, "missing power moments through index j");
    if (slack) *slack = 0.0;
    if (j == 0) return mu[0];
    if (j == 1) return mu[1];
    require(j <= 2 * kPowerConversionCap, "conversion degree too large");
    long double acc = 0.0L;
    long double mag = 0.0L;
    for (int i = 0; i <= j / 2; ++i) {
        const long double coef = std::ldexp(static_cast<long double>(detail::cheb_sum_g(j, i)),
                                            j - 2 * i - 1);
        const long double term = ((i & 1) ? -coef : coef) * static_cast<long double>(mu[j - 2 * i]);
        acc += term;
        mag += std::abs(term);
    }
    if (slack) *slack = static_cast<double>(mag) * (j / 2 + 1) * 0x1.0p-63;
    return static_cast<double>(acc);
}

/// Binomial transform of power moments under x -> 2x - 1: given
/// mu^(p) = <X^p>, returns nu^(i) = <(2X - 1)^i> for i = 0..j.
inline std::vector<double> moments_to_cheb_variable(std::span<const double> mu) {
    const int jmax = static_cast<int>(mu.size()) - 1;
    require(jmax >= 0, "no moments given");
    std::vector<double> nu(jmax + 1);
    for (int i = 0; i <= jmax; ++i) {
        long double acc = 0.0L;
        for (int p = 0; p <= i; ++p) {
            long double term = static_cast<long double>(binomial(i, p)) *
                               std::ldexp(static_cast<long double>(mu[p]), p);
            acc += ((i - p) & 1) ? -term : term;
        }
        nu[i] = static_cast<double>(acc);
    }
    return nu;
}

}  // namespace bettiq
