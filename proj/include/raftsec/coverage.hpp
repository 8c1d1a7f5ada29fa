// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "raftsec/channel.hpp"
#include "raftsec/geometry.hpp"

namespace raftsec::coverage {

enum class Method { closed_form, quadrature_oracle, monte_carlo };

const char* to_string(Method m);

/// Downlink, uplink and joint success probabilities of a typical follower.
/// Confidence half-widths (95%) are only populated for Monte Carlo results.
struct CoverageResult {
    double p_dl = 0.0;
    double p_ul = 0.0;
    double p_joint = 0.0;
    Method method = Method::closed_form;
    double quadrature_error_estimate = 0.0;
    double ci_dl = 0.0;
    double ci_ul = 0.0;
    double ci_joint = 0.0;
};

/// How the jammer annulus integral inside the Laplace transform is evaluated.
enum class LaplaceRoute {
    automatic,    ///< hypergeometric closed form, quadrature when z1 < kClosedFormMinZ1
    closed_form,  ///< hypergeometric closed form everywhere (z1 = 0 via its limit)
    quadrature,   ///< adaptive quadrature of the u-integral everywhere
};

/// Below this inner radius (metres) the closed form is a 0 * inf limit.
inline constexpr double kClosedFormMinZ1 = 1e-3;

/**
 * Laplace transform of the aggregate jammer interference, E[exp(-s I)] at
 * s = r^alpha beta / P, for jammers forming a PPP of intensity `rho_j` on the
 * annulus and Rayleigh fading on every jammer link.
 *
 * `beta` is the linear SIR threshold and `gamma` the jammer-to-transmitter
 * power ratio. Returns a value in (0, 1].
 */
double laplace_interference(double r, double beta, double gamma, double rho_j, double alpha,
                            const geometry::AnnulusRegion& annulus,
                            LaplaceRoute route = LaplaceRoute::automatic);

struct CoverageOptions {
    LaplaceRoute route = LaplaceRoute::automatic;
    /// Absolute tolerance of the outer integral over the follower distance.
    double abs_tol = 1e-10;
};

/// Outer integration limit: exp(-rho_t pi r_max^2) = exp(-30) < 1e-13.
double outer_radius(double rho_t);

/// Downlink coverage: E_R[ L(R; beta_dl, gamma_dl) ] with R ~ distance_pdf.
double coverage_dl(const channel::NetworkParams& params, const CoverageOptions& options = {});

/// Uplink coverage: same structure with (beta_ul, gamma_ul).
double coverage_ul(const channel::NetworkParams& params, const CoverageOptions& options = {});

/// p_joint = p_dl * p_ul.
CoverageResult coverage_joint(const channel::NetworkParams& params, const CoverageOptions& options = {});

}  // namespace raftsec::coverage
