// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Monte Carlo engine. Every trial draws from its own substream derived from
// (master_seed, trial index) and tallies are integer counts, so results are
// bit-identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <span>

#include "raftsec/auth.hpp"
#include "raftsec/channel.hpp"
#include "raftsec/coverage.hpp"
#include "raftsec/rng.hpp"

namespace raftsec::sim {

struct TrialConfig {
    std::size_t n_trials = 100000;
    std::uint64_t master_seed = 1;
    channel::NetworkParams params;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 1;

    void validate() const;
};

/// 1.96 * sqrt(p (1 - p) / n).
double ci95_halfwidth(double p, std::size_t n);
/// sqrt(p (1 - p) / n).
double binomial_se(double p, std::size_t n);

/**
 * Empirical coverage of a typical follower. Per trial the downlink and the
 * uplink each get their own follower distance from distance_pdf, their own
 * jammer PPP on the annulus centred on the receiver, and fresh fading.
 */
coverage::CoverageResult estimate_coverage(const TrialConfig& cfg);

/// Vote count of one consensus round.
struct ConsensusOutcome {
    std::size_t n_followers = 0;
    std::size_t n_dl_success = 0;
    std::size_t n_ul_success = 0;
    std::size_t n_both = 0;
    bool consensus_reached = false;
};

/// One round: followers PPP on the disk, jammers PPP on the annulus around
/// the leader, shared by every link. A follower's vote counts when its DL and
/// its UL both clear their thresholds. Consensus needs strictly more than
/// half of the followers, so an empty network never reaches it.
ConsensusOutcome simulate_round(const channel::NetworkParams& params, Engine& rng);

struct ConsensusEstimate {
    double p_consensus = 0.0;
    double ci_halfwidth = 0.0;
    double mean_followers = 0.0;
    /// Per-follower success rates pooled over all trials.
    double p_dl_follower = 0.0;
    double p_ul_follower = 0.0;
    double p_both_follower = 0.0;
    std::size_t n_trials = 0;
    std::uint64_t consensus_count = 0;
};

ConsensusEstimate simulate_consensus(const TrialConfig& cfg);

enum class AuthScenario { legit, eve };

/// Integer tallies of simulate_auth.
struct AuthTally {
    std::uint64_t legit_trials = 0;
    std::uint64_t false_alarms = 0;             ///< legitimate vote rejected
    std::uint64_t misclassified = 0;            ///< z outside the sender's cell (ML index wrong or z outside [psi_min, psi_max])
    std::uint64_t misclassified_ml = 0;         ///< ML index wrong
    std::uint64_t accepted_legit = 0;           ///< legitimate vote accepted
    std::uint64_t misclassified_accepted = 0;   ///< accepted under a wrong index
    std::uint64_t eve_trials = 0;
    std::uint64_t missed_detections = 0;        ///< impersonator accepted

    AuthTally& operator+=(const AuthTally& o);
};

struct AuthEstimate {
    AuthTally tally;
    double p_fa = 0.0;
    double p_md = 0.0;
    double p_mc = 0.0;
    double p_mc_ml = 0.0;
    double p_mc_given_h0 = 0.0;
};

/**
 * Empirical authentication error rates. Legitimate trials pick a follower by
 * its prior and observe z = Psi_i + n, n ~ N(0, sigma^2). Impersonation
 * trials pick an impersonator by its prior; its pathloss is taken from
 * `eve_pathlosses_db` when given, otherwise drawn from U(psi_min, psi_max).
 */
AuthEstimate simulate_auth(const auth::AuthProfile& profile, AuthScenario scenario, std::size_t n_trials,
                           std::uint64_t master_seed, std::span<const double> eve_pathlosses_db = {},
                           unsigned threads = 1);

}  // namespace raftsec::sim
