// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace raftsec::specfun {

/// Stopping rule shared by the series evaluators.
struct Tolerance {
    double abs_tol = 1e-12;
    std::size_t max_terms = 10000;

    void validate() const;
};

/// Thrown when a series fails to reach `abs_tol` within `max_terms`.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double partial_value, std::size_t terms)
        : std::runtime_error(what), partial_value_(partial_value), terms_(terms) {}

    double partial_value() const noexcept { return partial_value_; }
    std::size_t terms() const noexcept { return terms_; }

private:
    double partial_value_;
    std::size_t terms_;
};

/// Gaussian tail probability Q(x) = P[N(0,1) > x].
double q_function(double x);

/// Inverse of q_function on (0, 1).
double q_inverse(double p);

/**
 * Gauss hypergeometric function 2F1(a, b; c; z) for real z <= 0.
 *
 * Three evaluation regimes are used:
 *   - z in [-1/2, 0]: the defining power series;
 *   - z in [-2, -1/2): the Pfaff transformation, which maps z onto
 *     w = z/(z-1) in (1/3, 2/3];
 *   - z < -2: the analytic continuation in 1/z. It needs b - a to be
 *     non-integral; when it is, the Pfaff path is used instead.
 *
 * The interference closed forms only visit a = 1, b = 1 - 2/alpha,
 * c = 2 - 2/alpha with alpha > 2, where b - a = -2/alpha is never an integer.
 */
double hyp2f1(double a, double b, double c, double z, const Tolerance& tol = {});

}  // namespace raftsec::specfun
