// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#include "raftsec/consensus_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

namespace raftsec::sim {
namespace {

using geometry::Point2D;

unsigned resolve_threads(unsigned requested, std::size_t n_trials) {
    unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(n_trials, 1)));
}

// Runs trial(index, tally) for every index on contiguous per-thread blocks and
// sums the blocks in thread order.
template <class Tally, class Trial>
Tally run_trials(std::size_t n_trials, unsigned threads, Trial trial) {
    threads = resolve_threads(threads, n_trials);
    std::vector<Tally> partial(threads);
    auto work = [&](unsigned t) {
        const std::size_t begin = n_trials * t / threads;
        const std::size_t end = n_trials * (t + 1) / threads;
        for (std::size_t i = begin; i < end; ++i) {
            trial(i, partial[t]);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work, t);
        }
    }
    Tally total{};
    for (const auto& p : partial) {
        total += p;
    }
    return total;
}

std::vector<channel::FadingSample> draw_fading(std::size_t n, Engine& rng) {
    std::vector<channel::FadingSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(channel::sample_fading(rng));
    }
    return out;
}

Point2D at_distance(double r, Engine& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double theta = angle(rng);
    return {r * std::cos(theta), r * std::sin(theta)};
}

struct CoverageTally {
    std::uint64_t trials = 0;
    std::uint64_t dl = 0;
    std::uint64_t ul = 0;
    std::uint64_t both = 0;

    CoverageTally& operator+=(const CoverageTally& o) {
        trials += o.trials;
        dl += o.dl;
        ul += o.ul;
        both += o.both;
        return *this;
    }
};

struct ConsensusTally {
    std::uint64_t trials = 0;
    std::uint64_t reached = 0;
    std::uint64_t followers = 0;
    std::uint64_t dl = 0;
    std::uint64_t ul = 0;
    std::uint64_t both = 0;

    ConsensusTally& operator+=(const ConsensusTally& o) {
        trials += o.trials;
        reached += o.reached;
        followers += o.followers;
        dl += o.dl;
        ul += o.ul;
        both += o.both;
        return *this;
    }
};

double ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void TrialConfig::validate() const {
    if (n_trials < 1) {
        throw std::invalid_argument("TrialConfig: n_trials must be at least 1");
    }
    params.validate();
}

double binomial_se(double p, std::size_t n) {
    return n == 0 ? 0.0 : std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

double ci95_halfwidth(double p, std::size_t n) { return 1.96 * binomial_se(p, n); }

coverage::CoverageResult estimate_coverage(const TrialConfig& cfg) {
    cfg.validate();
    const auto& params = cfg.params;
    const double beta_dl = params.beta_dl();
    const double beta_ul = params.beta_ul();

    const auto tally = run_trials<CoverageTally>(cfg.n_trials, cfg.threads, [&](std::size_t i, CoverageTally& t) {
        Engine rng = substream(cfg.master_seed, i);

        // Downlink: jammer annulus centred on the receiving follower.
        const Point2D follower = at_distance(geometry::sample_nearest_distance(params.rho_t, rng), rng);
        auto jammers = geometry::sample_ppp(params.rho_j, params.jam_annulus, rng);
        for (auto& j : jammers) {
            j.x += follower.x;
            j.y += follower.y;
        }
        const auto dl_gain = channel::sample_fading(rng);
        const auto dl_jam = draw_fading(jammers.size(), rng);
        const bool dl_ok = channel::sir_dl(follower, jammers, {dl_gain, dl_jam}, params) > beta_dl;

        // Uplink: independent follower distance, annulus centred on the leader.
        const Point2D sender = at_distance(geometry::sample_nearest_distance(params.rho_t, rng), rng);
        const auto ul_jammers = geometry::sample_ppp(params.rho_j, params.jam_annulus, rng);
        const auto ul_gain = channel::sample_fading(rng);
        const auto ul_jam = draw_fading(ul_jammers.size(), rng);
        const bool ul_ok = channel::sir_ul(sender, ul_jammers, {ul_gain, ul_jam}, params) > beta_ul;

        ++t.trials;
        t.dl += dl_ok;
        t.ul += ul_ok;
        t.both += dl_ok && ul_ok;
    });

    coverage::CoverageResult out;
    out.method = coverage::Method::monte_carlo;
    out.p_dl = ratio(tally.dl, tally.trials);
    out.p_ul = ratio(tally.ul, tally.trials);
    out.p_joint = ratio(tally.both, tally.trials);
    out.ci_dl = ci95_halfwidth(out.p_dl, tally.trials);
    out.ci_ul = ci95_halfwidth(out.p_ul, tally.trials);
    out.ci_joint = ci95_halfwidth(out.p_joint, tally.trials);
    return out;
}

ConsensusOutcome simulate_round(const channel::NetworkParams& params, Engine& rng) {
    const auto followers = geometry::sample_ppp(params.rho_t, params.follower_disk, rng);
    const auto jammers = geometry::sample_ppp(params.rho_j, params.jam_annulus, rng);
    const double beta_dl = params.beta_dl();
    const double beta_ul = params.beta_ul();

    ConsensusOutcome out;
    out.n_followers = followers.size();
    for (const auto& f : followers) {
        const auto dl_gain = channel::sample_fading(rng);
        const auto dl_jam = draw_fading(jammers.size(), rng);
        const auto ul_gain = channel::sample_fading(rng);
        const auto ul_jam = draw_fading(jammers.size(), rng);
        const bool dl_ok = channel::sir_dl(f, jammers, {dl_gain, dl_jam}, params) > beta_dl;
        const bool ul_ok = channel::sir_ul(f, jammers, {ul_gain, ul_jam}, params) > beta_ul;
        out.n_dl_success += dl_ok;
        out.n_ul_success += ul_ok;
        out.n_both += dl_ok && ul_ok;
    }
    out.consensus_reached = 2 * out.n_both > out.n_followers;
    return out;
}

ConsensusEstimate simulate_consensus(const TrialConfig& cfg) {
    cfg.validate();
    const auto tally =
        run_trials<ConsensusTally>(cfg.n_trials, cfg.threads, [&](std::size_t i, ConsensusTally& t) {
            Engine rng = substream(cfg.master_seed, i);
            const auto round = simulate_round(cfg.params, rng);
            ++t.trials;
            t.reached += round.consensus_reached;
            t.followers += round.n_followers;
            t.dl += round.n_dl_success;
            t.ul += round.n_ul_success;
            t.both += round.n_both;
        });

    ConsensusEstimate out;
    out.n_trials = tally.trials;
    out.consensus_count = tally.reached;
    out.p_consensus = ratio(tally.reached, tally.trials);
    out.ci_halfwidth = ci95_halfwidth(out.p_consensus, tally.trials);
    out.mean_followers = ratio(tally.followers, tally.trials);
    out.p_dl_follower = ratio(tally.dl, tally.followers);
    out.p_ul_follower = ratio(tally.ul, tally.followers);
    out.p_both_follower = ratio(tally.both, tally.followers);
    return out;
}

AuthTally& AuthTally::operator+=(const AuthTally& o) {
    legit_trials += o.legit_trials;
    false_alarms += o.false_alarms;
    misclassified += o.misclassified;
    misclassified_ml += o.misclassified_ml;
    accepted_legit += o.accepted_legit;
    misclassified_accepted += o.misclassified_accepted;
    eve_trials += o.eve_trials;
    missed_detections += o.missed_detections;
    return *this;
}

AuthEstimate simulate_auth(const auth::AuthProfile& profile, AuthScenario scenario, std::size_t n_trials,
                           std::uint64_t master_seed, std::span<const double> eve_pathlosses_db,
                           unsigned threads) {
    if (n_trials < 1) {
        throw std::invalid_argument("simulate_auth: n_trials must be at least 1");
    }
    if (!eve_pathlosses_db.empty() && eve_pathlosses_db.size() != profile.eves()) {
        throw std::invalid_argument("simulate_auth: need one pathloss per impersonator prior");
    }
    const auto truth = profile.ground_truth();
    const auto& support = profile.eve_prior();
    const double sigma = profile.sigma();
    const double eps = profile.epsilon();
    const std::vector<double> follower_prior(profile.priors().begin(), profile.priors().end());
    const std::vector<double> eve_prior(profile.eve_priors().begin(), profile.eve_priors().end());

    const auto tally = run_trials<AuthTally>(n_trials, threads, [&](std::size_t i, AuthTally& t) {
        Engine rng = substream(master_seed, i);
        std::normal_distribution<double> noise(0.0, sigma);
        if (scenario == AuthScenario::legit) {
            std::discrete_distribution<std::size_t> pick(follower_prior.begin(), follower_prior.end());
            const std::size_t sender = pick(rng);
            const double z = truth[sender] + noise(rng);
            const auto id = auth::ml_identify(z, profile);
            const bool accepted = auth::decide(id.statistic, eps) == auth::Hypothesis::no_impersonation;
            const bool wrong_index = id.index != sender;
            const bool outside_support = z < support.psi_min_db || z > support.psi_max_db;
            ++t.legit_trials;
            t.false_alarms += !accepted;
            t.misclassified_ml += wrong_index;
            t.misclassified += wrong_index || outside_support;
            t.accepted_legit += accepted;
            t.misclassified_accepted += accepted && wrong_index;
        } else {
            std::discrete_distribution<std::size_t> pick(eve_prior.begin(), eve_prior.end());
            const std::size_t eve = pick(rng);
            double psi_e = 0.0;
            if (eve_pathlosses_db.empty()) {
                std::uniform_real_distribution<double> uniform(support.psi_min_db, support.psi_max_db);
                psi_e = uniform(rng);
            } else {
                psi_e = eve_pathlosses_db[eve];
            }
            const double z = psi_e + noise(rng);
            const auto id = auth::ml_identify(z, profile);
            ++t.eve_trials;
            t.missed_detections += auth::decide(id.statistic, eps) == auth::Hypothesis::no_impersonation;
        }
    });

    AuthEstimate out;
    out.tally = tally;
    out.p_fa = ratio(tally.false_alarms, tally.legit_trials);
    out.p_mc = ratio(tally.misclassified, tally.legit_trials);
    out.p_mc_ml = ratio(tally.misclassified_ml, tally.legit_trials);
    out.p_mc_given_h0 = ratio(tally.misclassified_accepted, tally.accepted_legit);
    out.p_md = ratio(tally.missed_detections, tally.eve_trials);
    return out;
}

}  // namespace raftsec::sim
