// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Globally adaptive 15-point Gauss-Kronrod quadrature with an absolute
// error target. The interval with the largest error estimate is bisected
// until the summed estimate drops below the target.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace raftsec::quadrature {

struct Options {
    double abs_tol = 1e-10;
    std::size_t max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, Result partial)
        : std::runtime_error(what), partial_(partial) {}
    const Result& partial() const noexcept { return partial_; }

private:
    Result partial_;
};

namespace detail {

// Kronrod abscissae; odd indices are the 7-point Gauss nodes, index 7 is the centre.
inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

// QUADPACK qk15 error heuristic.
template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_centre = f(centre);

    double result_gauss = f_centre * kWg[3];
    double result_kronrod = f_centre * kWgk[7];
    double result_abs = std::abs(result_kronrod);
    std::array<double, 7> f_lo{};
    std::array<double, 7> f_hi{};
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f_lo[j] = f(centre - dx);
        f_hi[j] = f(centre + dx);
        const double pair = f_lo[j] + f_hi[j];
        result_kronrod += kWgk[j] * pair;
        result_abs += kWgk[j] * (std::abs(f_lo[j]) + std::abs(f_hi[j]));
        if (j % 2 == 1) {
            result_gauss += kWg[j / 2] * pair;
        }
    }
    const double mean = 0.5 * result_kronrod;
    double result_asc = kWgk[7] * std::abs(f_centre - mean);
    for (std::size_t j = 0; j < 7; ++j) {
        result_asc += kWgk[j] * (std::abs(f_lo[j] - mean) + std::abs(f_hi[j] - mean));
    }

    const double abs_half = std::abs(half);
    result_asc *= abs_half;
    result_abs *= abs_half;
    double error = std::abs((result_kronrod - result_gauss) * half);
    if (result_asc != 0.0 && error != 0.0) {
        error = result_asc * std::min(1.0, std::pow(200.0 * error / result_asc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (result_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        error = std::max(50.0 * eps * result_abs, error);
    }
    return {a, b, result_kronrod * half, error};
}

}  // namespace detail

/// Integrates `f` over [a, b]. `breakpoints` inside (a, b) seed the initial
/// partition, which matters when the integrand has features narrower than
/// the 15-point rule can see on the whole range.
template <class F>
Result integrate(F&& f, double a, double b, const Options& options = {},
                 std::span<const double> breakpoints = {}) {
    if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
        throw std::domain_error("integrate: need finite a <= b");
    }
    Result out;
    if (a == b) {
        return out;
    }

    std::vector<double> cuts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) {
            cuts.push_back(p);
        }
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::Segment> heap;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto seg = detail::gauss_kronrod_15(f, cuts[i], cuts[i + 1]);
        out.evaluations += 15;
        total_error += seg.error;
        heap.push(seg);
    }

    auto finish = [&] {
        out.value = 0.0;
        out.error = 0.0;
        out.intervals = heap.size();
        auto copy = heap;
        while (!copy.empty()) {
            out.value += copy.top().value;
            out.error += copy.top().error;
            copy.pop();
        }
    };

    while (total_error > options.abs_tol) {
        if (heap.size() >= options.max_intervals) {
            finish();
            throw QuadratureError("integrate: interval limit reached before tolerance", out);
        }
        const detail::Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            finish();
            throw QuadratureError("integrate: interval cannot be bisected further", out);
        }
        heap.pop();
        auto left = detail::gauss_kronrod_15(f, worst.a, mid);
        auto right = detail::gauss_kronrod_15(f, mid, worst.b);
        out.evaluations += 30;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // The running sum drifts; resynchronise when it looks converged.
        if (total_error <= options.abs_tol) {
            finish();
            total_error = out.error;
        }
    }
    finish();
    return out;
}

}  // namespace raftsec::quadrature
