// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#include "raftsec/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace raftsec::channel {
namespace {

bool valid_threshold(double db) { return !std::isnan(db) && db != -std::numeric_limits<double>::infinity(); }

double sir_at(const geometry::Point2D& receiver, double signal_watts, double signal_distance,
              std::span<const geometry::Point2D> jammers, const LinkFading& fading,
              const NetworkParams& params) {
    if (!(signal_distance > 0.0)) {
        throw std::domain_error("sir: follower must not coincide with the leader");
    }
    if (fading.jammers.size() != jammers.size()) {
        throw std::invalid_argument("sir: one fading gain per jammer is required");
    }
    if (jammers.empty()) {
        return std::numeric_limits<double>::infinity();
    }
    const double jammer_watts = dbm_to_watts(params.p_jammer_dbm);
    double interference = 0.0;
    for (std::size_t j = 0; j < jammers.size(); ++j) {
        const double d = geometry::distance(jammers[j], receiver);
        interference += jammer_watts * fading.jammers[j].gain * std::pow(d, -params.alpha);
    }
    return signal_watts * fading.signal.gain * std::pow(signal_distance, -params.alpha) / interference;
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

void NetworkParams::validate() const {
    for (double p : {p_leader_dbm, p_follower_dbm, p_jammer_dbm}) {
        if (!std::isfinite(p)) {
            throw std::invalid_argument("NetworkParams: transmit powers must be finite");
        }
    }
    if (!(alpha > 2.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("NetworkParams: alpha must exceed 2");
    }
    if (!valid_threshold(beta_dl_db) || !valid_threshold(beta_ul_db)) {
        throw std::invalid_argument("NetworkParams: SIR thresholds must be finite (or +inf)");
    }
    if (!(rho_t > 0.0) || !std::isfinite(rho_t)) {
        throw std::invalid_argument("NetworkParams: rho_t must be positive");
    }
    if (!(rho_j >= 0.0) || !std::isfinite(rho_j)) {
        throw std::invalid_argument("NetworkParams: rho_j must be non-negative");
    }
}

double NetworkParams::gamma_dl() const { return dbm_to_watts(p_jammer_dbm) / dbm_to_watts(p_leader_dbm); }
double NetworkParams::gamma_ul() const { return dbm_to_watts(p_jammer_dbm) / dbm_to_watts(p_follower_dbm); }

NetworkParams reference_params() {
    NetworkParams p;
    p.rho_t = 15.0 / (std::numbers::pi * 500.0 * 500.0);
    p.rho_j = p.rho_t;
    return p;
}

FadingSample sample_fading(Engine& rng) {
    std::exponential_distribution<double> exp1(1.0);
    return {exp1(rng)};
}

double pathloss_db(double distance, double alpha) {
    if (!(distance > 0.0)) {
        throw std::domain_error("pathloss_db: distance must be positive");
    }
    return 10.0 * alpha * std::log10(distance);
}

double sir_dl(const geometry::Point2D& follower, std::span<const geometry::Point2D> jammers,
              const LinkFading& fading, const NetworkParams& params) {
    return sir_at(follower, dbm_to_watts(params.p_leader_dbm), follower.norm(), jammers, fading, params);
}

double sir_ul(const geometry::Point2D& follower, std::span<const geometry::Point2D> jammers,
              const LinkFading& fading, const NetworkParams& params) {
    return sir_at(geometry::Point2D{}, dbm_to_watts(params.p_follower_dbm), follower.norm(), jammers, fading,
                  params);
}

}  // namespace raftsec::channel
