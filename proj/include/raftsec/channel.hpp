// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "raftsec/geometry.hpp"
#include "raftsec/rng.hpp"

namespace raftsec::channel {

double db_to_linear(double db);
double linear_to_db(double linear);
/// dBm to watts.
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Radio and deployment parameters. Powers in dBm, thresholds in dB,
/// intensities in nodes/m^2, distances in metres.
struct NetworkParams {
    double p_leader_dbm = 30.0;
    double p_follower_dbm = 20.0;
    double p_jammer_dbm = 10.0;
    double alpha = 3.0;
    double beta_dl_db = -20.0;
    double beta_ul_db = -20.0;
    double rho_t = 0.0;
    double rho_j = 0.0;
    geometry::AnnulusRegion jam_annulus{0.0, 300.0};
    geometry::DiskRegion follower_disk{500.0};

    /// Throws std::invalid_argument. A threshold of +inf is accepted as the
    /// "never covered" sentinel.
    void validate() const;

    /// P_j / P_leader.
    double gamma_dl() const;
    /// P_j / P_follower.
    double gamma_ul() const;
    double beta_dl() const { return db_to_linear(beta_dl_db); }
    double beta_ul() const { return db_to_linear(beta_ul_db); }
};

/// Reference scenario: 30/20/10 dBm, alpha = 3, 15 followers
/// expected over a 500 m disk, rho_j = rho_t, jammers in [0, 300] m.
NetworkParams reference_params();

/// Small-scale power gain |h|^2 ~ Exp(1).
struct FadingSample {
    double gain = 1.0;
};

FadingSample sample_fading(Engine& rng);

/// Fading of one receive event: the desired link and one gain per jammer.
struct LinkFading {
    FadingSample signal;
    std::span<const FadingSample> jammers;
};

/// 10 alpha log10(d).
double pathloss_db(double distance, double alpha);

/// SIR at a follower receiving the leader. Interference distances are
/// measured from the follower. Returns +inf when there are no jammers.
double sir_dl(const geometry::Point2D& follower, std::span<const geometry::Point2D> jammers,
              const LinkFading& fading, const NetworkParams& params);

/// SIR at the leader (origin) receiving a follower's vote.
double sir_ul(const geometry::Point2D& follower, std::span<const geometry::Point2D> jammers,
              const LinkFading& fading, const NetworkParams& params);

}  // namespace raftsec::channel
