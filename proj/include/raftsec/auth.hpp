// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "raftsec/geometry.hpp"

namespace raftsec::auth {

/// Support of the impersonator pathloss, Psi_E ~ U(psi_min, psi_max), in dB.
struct EvePrior {
    double psi_min_db = 0.0;
    double psi_max_db = 0.0;

    double width() const { return psi_max_db - psi_min_db; }
};

/// Pathloss at 1 m and at the disk edge: the range a node inside the disk can show.
EvePrior default_eve_prior(double alpha, double disk_radius);

/// Link quality LQ = 1/sigma^2 expressed in dB, so sigma = 10^(-LQ/20).
double lq_db_to_sigma(double lq_db);
double sigma_to_lq_db(double sigma);

/**
 * Everything the leader needs to authenticate a vote by its pathloss:
 * the followers' ground-truth fingerprints, the measurement noise, the test
 * threshold, and priors over followers and impersonators. All in dB.
 */
class AuthProfile {
public:
    AuthProfile(std::vector<double> ground_truth_db, double sigma_db, double epsilon_db, EvePrior eve_prior,
                std::vector<double> priors, std::vector<double> eve_priors);

    /// Equal priors over the M followers and the N impersonators.
    static AuthProfile equal_priors(std::vector<double> ground_truth_db, double sigma_db, double epsilon_db,
                                    EvePrior eve_prior, std::size_t n_eves);

    AuthProfile with_epsilon(double epsilon_db) const;
    AuthProfile with_sigma(double sigma_db) const;

    std::span<const double> ground_truth() const { return truth_; }
    std::span<const double> sorted_truth() const { return sorted_; }
    double sigma() const { return sigma_; }
    double epsilon() const { return epsilon_; }
    const EvePrior& eve_prior() const { return eve_prior_; }
    std::span<const double> priors() const { return priors_; }
    std::span<const double> eve_priors() const { return eve_priors_; }
    std::size_t followers() const { return truth_.size(); }
    std::size_t eves() const { return eve_priors_.size(); }

private:
    std::vector<double> truth_;
    std::vector<double> sorted_;
    double sigma_;
    double epsilon_;
    EvePrior eve_prior_;
    std::vector<double> priors_;
    std::vector<double> eve_priors_;
};

struct ErrorProbabilities {
    double p_fa = 0.0;
    double p_md = 0.0;
    double p_md_expected = 0.0;
    double p_mc = 0.0;
};

/// A probability computed from a formula that can leave [0, 1]; `raw` keeps
/// the unclipped value so callers can report when clipping fired.
struct BoundedProbability {
    double value = 0.0;
    double raw = 0.0;

    bool clipped() const { return value != raw; }
};

/// Leader-side fingerprints: pathloss_db(|follower|, alpha) per follower.
std::vector<double> ground_truth_from_deployment(const geometry::Deployment& deployment, double alpha);

struct Identification {
    double statistic = 0.0;  ///< min_i |z - Psi_i|, dB
    std::size_t index = 0;   ///< index into ground_truth(); lowest index wins ties
};

/// Maximum-likelihood transmitter identification under Gaussian noise.
Identification ml_identify(double z_db, const AuthProfile& profile);

enum class Hypothesis { no_impersonation, impersonation };

/// H0 iff statistic < epsilon; statistic == epsilon is rejected (H1).
Hypothesis decide(double statistic, double epsilon);

/// Neyman-Pearson threshold for a false-alarm target: sigma Q^{-1}(p_fa / 2).
double threshold_for_pfa(double p_fa_target, double sigma);

/// 2 Q(epsilon / sigma), capped at 1.
double p_fa_closed_form(double epsilon, double sigma);

enum class MissWeighting {
    per_eve,    ///< sum_j pi(j) sum_i [...], the acceptance probability of a known Eve set
    divided_by_m,  ///< sum_j (pi(j)/M) sum_i [...]
};

/// Missed-detection probability for impersonators with known pathlosses.
/// `eve_pathlosses_db` must have one entry per impersonator prior.
BoundedProbability p_md_closed_form(const AuthProfile& profile, std::span<const double> eve_pathlosses_db,
                                    MissWeighting weighting = MissWeighting::per_eve);

/// Missed-detection probability averaged over Psi_E ~ U(psi_min, psi_max).
BoundedProbability p_md_expected(const AuthProfile& profile);

/// Misclassification probability: one minus the mass of each follower's
/// midpoint cell, cells closed by psi_min and psi_max. Independent of epsilon.
double p_mc_closed_form(const AuthProfile& profile);

ErrorProbabilities closed_form_errors(const AuthProfile& profile, std::span<const double> eve_pathlosses_db);

struct RocPoint {
    double p_fa = 0.0;
    double epsilon = 0.0;
    double p_d = 0.0;
};

/// Detection probability 1 - p_md_expected at the threshold of each target.
std::vector<RocPoint> roc_curve(const AuthProfile& profile, std::span<const double> p_fa_grid);

/// One PPP realisation with fixed counts: followers and impersonators
/// uniform in the disk, and their pathlosses to the leader.
struct Realization {
    std::vector<geometry::Point2D> followers;
    std::vector<geometry::Point2D> eves;
    std::vector<double> follower_pathloss_db;
    std::vector<double> eve_pathloss_db;
};

inline constexpr std::uint64_t kDefaultRealizationSeed = 2022;

Realization make_realization(std::size_t m, std::size_t n, const geometry::DiskRegion& disk, double alpha,
                             std::uint64_t seed = kDefaultRealizationSeed);

}  // namespace raftsec::auth
