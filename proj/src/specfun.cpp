// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#include "raftsec/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace raftsec::specfun {
namespace {

bool is_non_positive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

// 1/Gamma(x), zero at the poles.
double rgamma(double x) { return is_non_positive_integer(x) ? 0.0 : 1.0 / std::tgamma(x); }

// Lower-tail normal quantile, Acklam's rational approximation (rel. error ~1e-9).
double normal_quantile_initial(double p) {
    constexpr std::array a{-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                           1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    constexpr std::array b{-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                           6.680131188771972e+01,  -1.328068155288572e+01};
    constexpr std::array c{-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                           -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    constexpr std::array d{7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                           3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Q^{-1}(p) for p in (0, 1/2]; result >= 0.
double upper_tail_quantile(double p) {
    double x = -normal_quantile_initial(p);
    // Halley steps on Q(x) - p; the tail of Q is computed by erfc without cancellation.
    for (int i = 0; i < 3; ++i) {
        const double e = q_function(x) - p;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x += u / (1.0 - 0.5 * x * u);
    }
    return x;
}

// Defining power series. |x| < 1 is assumed unless the series terminates.
double power_series(double a, double b, double c, double x, const Tolerance& tol) {
    double sum = 1.0;
    double term = 1.0;
    const double ax = std::abs(x);
    for (std::size_t n = 0; n < tol.max_terms; ++n) {
        const double dn = static_cast<double>(n);
        const double ratio = (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * x;
        term *= ratio;
        if (term == 0.0) {
            return sum;
        }
        sum += term;
        // Geometric bound on the remaining tail; the term ratio tends to |x| from either side.
        const double rho = std::max(std::abs(ratio), ax);
        if (rho < 1.0 && std::abs(term) * rho / (1.0 - rho) <= tol.abs_tol * std::max(1.0, std::abs(sum))) {
            return sum;
        }
    }
    throw ConvergenceError("hyp2f1: series did not converge", sum, tol.max_terms);
}

}  // namespace

void Tolerance::validate() const {
    if (!(abs_tol > 0.0)) {
        throw std::invalid_argument("Tolerance: abs_tol must be positive");
    }
    if (max_terms < 1) {
        throw std::invalid_argument("Tolerance: max_terms must be at least 1");
    }
}

double q_function(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("q_function: argument must be finite");
    }
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("q_inverse: probability must lie in (0, 1)");
    }
    if (p == 0.5) {
        return 0.0;
    }
    // 1 - p is exact for p in (1/2, 1).
    return p < 0.5 ? upper_tail_quantile(p) : -upper_tail_quantile(1.0 - p);
}

double hyp2f1(double a, double b, double c, double z, const Tolerance& tol) {
    tol.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z)) {
        throw std::domain_error("hyp2f1: arguments must be finite");
    }
    if (is_non_positive_integer(c)) {
        throw std::domain_error("hyp2f1: c must not be a non-positive integer");
    }
    if (z > 0.0) {
        throw std::domain_error("hyp2f1: only z <= 0 is supported");
    }
    if (z == 0.0) {
        return 1.0;
    }
    // Polynomial case.
    if (is_non_positive_integer(a) || is_non_positive_integer(b)) {
        return power_series(a, b, c, z, tol);
    }
    if (z >= -0.5) {
        return power_series(a, b, c, z, tol);
    }

    const double a_minus_b = a - b;
    if (z >= -2.0 || std::floor(a_minus_b) == a_minus_b) {
        // Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)).
        const double w = z / (z - 1.0);
        return std::pow(1.0 - z, -a) * power_series(a, c - b, c, w, tol);
    }

    // Continuation in 1/z for z < -2.
    const double x = 1.0 / z;
    const double gc = std::tgamma(c);
    const double c1 = gc * std::tgamma(b - a) * rgamma(b) * rgamma(c - a);
    const double c2 = gc * std::tgamma(a - b) * rgamma(a) * rgamma(c - b);
    double result = 0.0;
    if (c1 != 0.0) {
        result += c1 * std::pow(-z, -a) * power_series(a, a - c + 1.0, a - b + 1.0, x, tol);
    }
    if (c2 != 0.0) {
        result += c2 * std::pow(-z, -b) * power_series(b, b - c + 1.0, b - a + 1.0, x, tol);
    }
    return result;
}

}  // namespace raftsec::specfun
