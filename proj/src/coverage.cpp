// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#include "raftsec/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "raftsec/quadrature.hpp"
#include "raftsec/specfun.hpp"

namespace raftsec::coverage {
namespace {

constexpr double kPi = std::numbers::pi;

// Target absolute error on the exponent of the Laplace transform.
constexpr double kExponentTol = 1e-12;

struct Integral {
    double value;
    double error;
};

// z^(2-alpha) 2F1(1, 1-2/alpha; 2-2/alpha; -k z^-alpha), with k = gamma beta r^alpha.
// The z -> 0 limit is Gamma(2-2/alpha) Gamma(2/alpha) k^(2/alpha - 1).
double annulus_edge_term(double z, double k, double alpha) {
    const double delta = 2.0 / alpha;
    if (z == 0.0) {
        return std::tgamma(2.0 - delta) * std::tgamma(delta) * std::pow(k, delta - 1.0);
    }
    const double arg = -k * std::pow(z, -alpha);
    return std::pow(z, 2.0 - alpha) * specfun::hyp2f1(1.0, 1.0 - delta, 2.0 - delta, arg);
}

double closed_form_exponent(double r, double gb, double rho_j, double alpha,
                            const geometry::AnnulusRegion& annulus) {
    const double k = gb * std::pow(r, alpha);
    const double bracket =
        annulus_edge_term(annulus.outer(), k, alpha) - annulus_edge_term(annulus.inner(), k, alpha);
    return kPi * rho_j * k / (alpha / 2.0 - 1.0) * bracket;
}

double quadrature_exponent(double r, double gb, double rho_j, double alpha,
                           const geometry::AnnulusRegion& annulus) {
    const double scale = r * std::pow(gb, 1.0 / alpha);
    const double u_lo = std::pow(annulus.inner() / scale, 2.0);
    const double u_hi = std::pow(annulus.outer() / scale, 2.0);
    const double prefactor = kPi * rho_j * r * r * std::pow(gb, 2.0 / alpha);

    std::vector<double> cuts;
    for (double p = 1e-6; p < u_hi; p *= 10.0) {
        cuts.push_back(p);
    }
    quadrature::Options opts;
    opts.abs_tol = std::max(kExponentTol / prefactor, 1e-12);
    const auto integral = quadrature::integrate(
        [alpha](double u) { return 1.0 / (1.0 + std::pow(u, alpha / 2.0)); }, u_lo, u_hi, opts, cuts);
    return -prefactor * integral.value;
}

Integral coverage_integral(double beta, double gamma, const channel::NetworkParams& params,
                           const CoverageOptions& options) {
    params.validate();
    if (std::isinf(beta)) {
        return {0.0, 0.0};
    }
    const double rho_t = params.rho_t;
    auto integrand = [&](double r) {
        const double f_r = 2.0 * kPi * rho_t * r * std::exp(-rho_t * kPi * r * r);
        return laplace_interference(r, beta, gamma, params.rho_j, params.alpha, params.jam_annulus,
                                    options.route) *
               f_r;
    };
    quadrature::Options opts;
    opts.abs_tol = options.abs_tol;
    const double r_max = outer_radius(rho_t);
    const double mode = 1.0 / std::sqrt(2.0 * kPi * rho_t);
    const std::vector<double> cuts{mode, 2.0 * mode, 4.0 * mode};
    try {
        const auto res = quadrature::integrate(integrand, 0.0, r_max, opts, cuts);
        return {std::clamp(res.value, 0.0, 1.0), res.error};
    } catch (const quadrature::QuadratureError& e) {
        throw std::runtime_error(std::string("coverage: outer quadrature failed (") + e.what() + ", estimate " +
                                 std::to_string(e.partial().value) + ", error " +
                                 std::to_string(e.partial().error) + ")");
    }
}

}  // namespace

const char* to_string(Method m) {
    switch (m) {
        case Method::closed_form:
            return "closed_form";
        case Method::quadrature_oracle:
            return "quadrature_oracle";
        case Method::monte_carlo:
            return "monte_carlo";
    }
    return "unknown";
}

double laplace_interference(double r, double beta, double gamma, double rho_j, double alpha,
                            const geometry::AnnulusRegion& annulus, LaplaceRoute route) {
    if (!(r > 0.0) || !(beta > 0.0) || !(gamma > 0.0) || !(alpha > 2.0) || !(rho_j >= 0.0)) {
        throw std::domain_error("laplace_interference: need r, beta, gamma > 0, rho_j >= 0, alpha > 2");
    }
    if (rho_j == 0.0) {
        return 1.0;
    }
    if (std::isinf(beta)) {
        return 0.0;
    }
    const double gb = gamma * beta;
    const bool use_quadrature =
        route == LaplaceRoute::quadrature ||
        (route == LaplaceRoute::automatic && annulus.inner() < kClosedFormMinZ1);
    double exponent = 0.0;
    try {
        exponent = use_quadrature ? quadrature_exponent(r, gb, rho_j, alpha, annulus)
                                  : closed_form_exponent(r, gb, rho_j, alpha, annulus);
    } catch (const quadrature::QuadratureError& e) {
        throw std::runtime_error(std::string("laplace_interference: ") + e.what());
    }
    // The exponent is non-positive; rounding can push it a hair above zero.
    return std::exp(std::min(exponent, 0.0));
}

double outer_radius(double rho_t) { return std::sqrt(30.0 / (kPi * rho_t)); }

double coverage_dl(const channel::NetworkParams& params, const CoverageOptions& options) {
    return coverage_integral(params.beta_dl(), params.gamma_dl(), params, options).value;
}

double coverage_ul(const channel::NetworkParams& params, const CoverageOptions& options) {
    return coverage_integral(params.beta_ul(), params.gamma_ul(), params, options).value;
}

CoverageResult coverage_joint(const channel::NetworkParams& params, const CoverageOptions& options) {
    const auto dl = coverage_integral(params.beta_dl(), params.gamma_dl(), params, options);
    const auto ul = coverage_integral(params.beta_ul(), params.gamma_ul(), params, options);
    CoverageResult out;
    out.p_dl = dl.value;
    out.p_ul = ul.value;
    out.p_joint = dl.value * ul.value;
    out.method = options.route == LaplaceRoute::quadrature ? Method::quadrature_oracle : Method::closed_form;
    out.quadrature_error_estimate = dl.error + ul.error;
    return out;
}

}  // namespace raftsec::coverage
