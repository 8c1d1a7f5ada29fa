// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#include "raftsec/auth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "raftsec/channel.hpp"
#include "raftsec/quadrature.hpp"
#include "raftsec/rng.hpp"
#include "raftsec/specfun.hpp"

namespace raftsec::auth {
namespace {

using specfun::q_function;

void check_distribution(std::span<const double> p, const char* what) {
    if (p.empty()) {
        throw std::invalid_argument(std::string("AuthProfile: ") + what + " must not be empty");
    }
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument(std::string("AuthProfile: ") + what + " must be non-negative");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument(std::string("AuthProfile: ") + what + " must sum to 1");
    }
}

BoundedProbability bounded(double raw) { return {std::clamp(raw, 0.0, 1.0), raw}; }

// Probability that Psi_E + n lands within epsilon of psi_i.
double window_mass(double psi_i, double psi_e, double epsilon, double sigma) {
    return q_function((psi_i - psi_e - epsilon) / sigma) - q_function((psi_i - psi_e + epsilon) / sigma);
}

// Q((edge - centre)/sigma) with infinite edges allowed.
double tail(double edge, double centre, double sigma) {
    const double x = (edge - centre) / sigma;
    if (std::isinf(x)) {
        return x > 0 ? 0.0 : 1.0;
    }
    return q_function(x);
}

}  // namespace

EvePrior default_eve_prior(double alpha, double disk_radius) {
    return {channel::pathloss_db(1.0, alpha), channel::pathloss_db(disk_radius, alpha)};
}

double lq_db_to_sigma(double lq_db) { return std::pow(10.0, -lq_db / 20.0); }
double sigma_to_lq_db(double sigma) { return -20.0 * std::log10(sigma); }

AuthProfile::AuthProfile(std::vector<double> ground_truth_db, double sigma_db, double epsilon_db,
                         EvePrior eve_prior, std::vector<double> priors, std::vector<double> eve_priors)
    : truth_(std::move(ground_truth_db)),
      sigma_(sigma_db),
      epsilon_(epsilon_db),
      eve_prior_(eve_prior),
      priors_(std::move(priors)),
      eve_priors_(std::move(eve_priors)) {
    if (truth_.empty()) {
        throw std::invalid_argument("AuthProfile: at least one follower fingerprint is required");
    }
    for (double v : truth_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("AuthProfile: fingerprints must be finite");
        }
    }
    if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) {
        throw std::invalid_argument("AuthProfile: sigma must be positive");
    }
    if (!(epsilon_ >= 0.0)) {
        throw std::invalid_argument("AuthProfile: epsilon must be non-negative");
    }
    if (!(eve_prior_.width() > 0.0) || !std::isfinite(eve_prior_.width())) {
        throw std::invalid_argument("AuthProfile: need psi_min < psi_max");
    }
    if (priors_.size() != truth_.size()) {
        throw std::invalid_argument("AuthProfile: one prior per follower is required");
    }
    check_distribution(priors_, "follower priors");
    check_distribution(eve_priors_, "impersonator priors");
    sorted_ = truth_;
    std::sort(sorted_.begin(), sorted_.end());
}

AuthProfile AuthProfile::equal_priors(std::vector<double> ground_truth_db, double sigma_db, double epsilon_db,
                                      EvePrior eve_prior, std::size_t n_eves) {
    const std::size_t m = ground_truth_db.size();
    std::vector<double> priors(m, m ? 1.0 / static_cast<double>(m) : 0.0);
    std::vector<double> eve_priors(n_eves, n_eves ? 1.0 / static_cast<double>(n_eves) : 0.0);
    return AuthProfile(std::move(ground_truth_db), sigma_db, epsilon_db, eve_prior, std::move(priors),
                       std::move(eve_priors));
}

AuthProfile AuthProfile::with_epsilon(double epsilon_db) const {
    return AuthProfile(truth_, sigma_, epsilon_db, eve_prior_, priors_, eve_priors_);
}

AuthProfile AuthProfile::with_sigma(double sigma_db) const {
    return AuthProfile(truth_, sigma_db, epsilon_, eve_prior_, priors_, eve_priors_);
}

std::vector<double> ground_truth_from_deployment(const geometry::Deployment& deployment, double alpha) {
    std::vector<double> out;
    out.reserve(deployment.followers.size());
    for (const auto& f : deployment.followers) {
        const double d = geometry::distance(f, deployment.leader);
        if (!(d > 0.0)) {
            throw std::domain_error("ground_truth_from_deployment: follower coincides with the leader");
        }
        out.push_back(channel::pathloss_db(d, alpha));
    }
    return out;
}

Identification ml_identify(double z_db, const AuthProfile& profile) {
    const auto truth = profile.ground_truth();
    Identification best{std::abs(z_db - truth[0]), 0};
    for (std::size_t i = 1; i < truth.size(); ++i) {
        const double d = std::abs(z_db - truth[i]);
        if (d < best.statistic) {
            best = {d, i};
        }
    }
    return best;
}

Hypothesis decide(double statistic, double epsilon) {
    return statistic < epsilon ? Hypothesis::no_impersonation : Hypothesis::impersonation;
}

double threshold_for_pfa(double p_fa_target, double sigma) {
    if (!(p_fa_target > 0.0 && p_fa_target < 1.0)) {
        throw std::domain_error("threshold_for_pfa: target must lie in (0, 1)");
    }
    if (!(sigma > 0.0)) {
        throw std::domain_error("threshold_for_pfa: sigma must be positive");
    }
    return sigma * specfun::q_inverse(p_fa_target / 2.0);
}

double p_fa_closed_form(double epsilon, double sigma) {
    if (!(sigma > 0.0) || !(epsilon >= 0.0)) {
        throw std::domain_error("p_fa_closed_form: need sigma > 0 and epsilon >= 0");
    }
    if (std::isinf(epsilon)) {
        return 0.0;
    }
    return std::min(1.0, 2.0 * q_function(epsilon / sigma));
}

BoundedProbability p_md_closed_form(const AuthProfile& profile, std::span<const double> eve_pathlosses_db,
                                    MissWeighting weighting) {
    if (eve_pathlosses_db.empty() || eve_pathlosses_db.size() != profile.eves()) {
        throw std::invalid_argument("p_md_closed_form: need one pathloss per impersonator prior");
    }
    const auto pi_j = profile.eve_priors();
    const double per_follower =
        weighting == MissWeighting::divided_by_m ? 1.0 / static_cast<double>(profile.followers()) : 1.0;
    double total = 0.0;
    for (std::size_t j = 0; j < eve_pathlosses_db.size(); ++j) {
        double accept = 0.0;
        for (double psi_i : profile.ground_truth()) {
            accept += window_mass(psi_i, eve_pathlosses_db[j], profile.epsilon(), profile.sigma());
        }
        total += accept * pi_j[j] * per_follower;
    }
    return bounded(total);
}

BoundedProbability p_md_expected(const AuthProfile& profile) {
    const double eps = profile.epsilon();
    if (eps == 0.0) {
        return {0.0, 0.0};
    }
    const double sigma = profile.sigma();
    const auto& prior = profile.eve_prior();
    auto integrand = [&](double psi_e) {
        double s = 0.0;
        for (double psi_i : profile.ground_truth()) {
            s += window_mass(psi_i, psi_e, eps, sigma);
        }
        return s;
    };
    // Each window is a smoothed step of width 2 epsilon; seed the partition
    // with its edges so narrow windows cannot be stepped over.
    std::vector<double> cuts;
    for (double psi_i : profile.ground_truth()) {
        for (double k : {-4.0, 0.0, 4.0}) {
            cuts.push_back(psi_i - eps + k * sigma);
            cuts.push_back(psi_i + eps + k * sigma);
        }
        cuts.push_back(psi_i);
    }
    quadrature::Options opts;
    opts.abs_tol = 1e-8 * prior.width();
    quadrature::Result res;
    try {
        res = quadrature::integrate(integrand, prior.psi_min_db, prior.psi_max_db, opts, cuts);
    } catch (const quadrature::QuadratureError& e) {
        throw std::runtime_error(std::string("p_md_expected: ") + e.what());
    }
    double weight = 0.0;
    for (double pj : profile.eve_priors()) {
        weight += pj / prior.width();
    }
    return bounded(weight * res.value);
}

double p_mc_closed_form(const AuthProfile& profile) {
    const auto truth = profile.ground_truth();
    const auto priors = profile.priors();
    const std::size_t m = truth.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return truth[a] < truth[b]; });

    const double sigma = profile.sigma();
    const auto& prior = profile.eve_prior();
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double centre = truth[order[k]];
        const double lower = k == 0 ? prior.psi_min_db : 0.5 * (truth[order[k - 1]] + centre);
        const double upper = k + 1 == m ? prior.psi_max_db : 0.5 * (centre + truth[order[k + 1]]);
        const double inside = tail(lower, centre, sigma) - tail(upper, centre, sigma);
        total += (1.0 - inside) * priors[order[k]];
    }
    return std::clamp(total, 0.0, 1.0);
}

ErrorProbabilities closed_form_errors(const AuthProfile& profile, std::span<const double> eve_pathlosses_db) {
    return {p_fa_closed_form(profile.epsilon(), profile.sigma()),
            p_md_closed_form(profile, eve_pathlosses_db).value, p_md_expected(profile).value,
            p_mc_closed_form(profile)};
}

std::vector<RocPoint> roc_curve(const AuthProfile& profile, std::span<const double> p_fa_grid) {
    std::vector<RocPoint> out;
    out.reserve(p_fa_grid.size());
    for (double p_fa : p_fa_grid) {
        const double eps = threshold_for_pfa(p_fa, profile.sigma());
        const double p_md = p_md_expected(profile.with_epsilon(eps)).value;
        out.push_back({p_fa, eps, 1.0 - p_md});
    }
    return out;
}

Realization make_realization(std::size_t m, std::size_t n, const geometry::DiskRegion& disk, double alpha,
                             std::uint64_t seed) {
    Engine rng = substream(seed, 0);
    Realization out;
    out.followers = geometry::sample_uniform(disk, m, rng);
    out.eves = geometry::sample_uniform(disk, n, rng);
    for (const auto& p : out.followers) {
        out.follower_pathloss_db.push_back(channel::pathloss_db(p.norm(), alpha));
    }
    for (const auto& p : out.eves) {
        out.eve_pathloss_db.push_back(channel::pathloss_db(p.norm(), alpha));
    }
    return out;
}

}  // namespace raftsec::auth
