// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "raftsec/auth.hpp"
#include "raftsec/specfun.hpp"

using namespace raftsec;
using namespace raftsec::auth;

namespace {

const EvePrior kPrior{0.0, 30.0 * std::log10(500.0)};

AuthProfile spread_profile(double sigma, double eps) {
    return AuthProfile::equal_priors({47.0, 62.0, 70.0, 74.0, 79.0}, sigma, eps, kPrior, 5);
}

}  // namespace

TEST(Units, LinkQuality) {
    EXPECT_NEAR(lq_db_to_sigma(10.0), 1.0 / std::sqrt(10.0), 1e-15);
    EXPECT_NEAR(lq_db_to_sigma(0.0), 1.0, 1e-15);
    EXPECT_NEAR(sigma_to_lq_db(lq_db_to_sigma(13.0)), 13.0, 1e-12);
    const auto p = default_eve_prior(3.0, 500.0);
    EXPECT_EQ(p.psi_min_db, 0.0);
    EXPECT_NEAR(p.psi_max_db, 80.96910013008056, 1e-10);
}

TEST(Profile, Invariants) {
    EXPECT_THROW(AuthProfile::equal_priors({}, 1.0, 1.0, kPrior, 1), std::invalid_argument);
    EXPECT_THROW(AuthProfile::equal_priors({50.0}, 0.0, 1.0, kPrior, 1), std::invalid_argument);
    EXPECT_THROW(AuthProfile::equal_priors({50.0}, 1.0, -1.0, kPrior, 1), std::invalid_argument);
    EXPECT_THROW(AuthProfile::equal_priors({50.0}, 1.0, 1.0, EvePrior{10.0, 10.0}, 1), std::invalid_argument);
    EXPECT_THROW(AuthProfile({50.0, 60.0}, 1.0, 1.0, kPrior, {0.5, 0.6}, {1.0}), std::invalid_argument);
    EXPECT_THROW(AuthProfile({50.0, 60.0}, 1.0, 1.0, kPrior, {0.5, 0.5}, {}), std::invalid_argument);
    const auto p = AuthProfile::equal_priors({70.0, 50.0, 60.0}, 1.0, 1.0, kPrior, 2);
    EXPECT_TRUE(std::is_sorted(p.sorted_truth().begin(), p.sorted_truth().end()));
    EXPECT_EQ(p.ground_truth()[0], 70.0);
}

TEST(GroundTruth, FromDeployment) {
    geometry::Deployment d;
    d.followers = {{1.0, 0.0}};
    EXPECT_EQ(ground_truth_from_deployment(d, 3.0), std::vector<double>{0.0});
    d.followers = {{10.0, 0.0}, {0.0, 100.0}};
    const auto v = ground_truth_from_deployment(d, 3.0);
    EXPECT_NEAR(v[0], 30.0, 1e-12);
    EXPECT_NEAR(v[1], 60.0, 1e-12);
    d.followers = {{0.0, 0.0}};
    EXPECT_THROW(ground_truth_from_deployment(d, 3.0), std::domain_error);
}

TEST(GroundTruth, FrozenRealization) {
    const auto r = make_realization(5, 5, geometry::DiskRegion(500.0), 3.0);
    ASSERT_EQ(r.follower_pathloss_db.size(), 5u);
    ASSERT_EQ(r.eve_pathloss_db.size(), 5u);
    const std::vector<double> frozen{79.9634, 47.3473, 78.7806, 74.1703, 62.5177};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_NEAR(r.follower_pathloss_db[i], frozen[i], 1e-4);
    }
    const auto again = make_realization(5, 5, geometry::DiskRegion(500.0), 3.0);
    EXPECT_EQ(again.eve_pathloss_db, r.eve_pathloss_db);
}

TEST(MlIdentify, Examples) {
    const auto p = AuthProfile::equal_priors({60.0, 70.0, 80.0}, 1.0, 1.0, kPrior, 1);
    auto id = ml_identify(71.0, p);
    EXPECT_NEAR(id.statistic, 1.0, 1e-12);
    EXPECT_EQ(id.index, 1u);
    id = ml_identify(80.0, p);
    EXPECT_EQ(id.statistic, 0.0);
    EXPECT_EQ(id.index, 2u);
    id = ml_identify(65.0, p);
    EXPECT_EQ(id.index, 0u);
}

TEST(Decide, Convention) {
    EXPECT_EQ(decide(0.0, 1.0), Hypothesis::no_impersonation);
    EXPECT_EQ(decide(1.0, 1.0), Hypothesis::impersonation);
    EXPECT_EQ(decide(2.0, 1.0), Hypothesis::impersonation);
}

TEST(Threshold, Values) {
    EXPECT_NEAR(threshold_for_pfa(0.1, 1.0), 1.6448536269514722, 1e-10);
    EXPECT_NEAR(threshold_for_pfa(0.1, 1.0), oracle::gaussian_tail_inverse(0.05), 1e-9);
    EXPECT_EQ(threshold_for_pfa(0.1, 2.0), 2.0 * threshold_for_pfa(0.1, 1.0));
    EXPECT_LT(threshold_for_pfa(1.0 - 1e-12, 1.0), 1e-9);
    for (double t : {1e-6, 0.01, 0.1, 0.5, 0.9}) {
        EXPECT_NEAR(p_fa_closed_form(threshold_for_pfa(t, 0.7), 0.7), t, 1e-10);
    }
    EXPECT_THROW(threshold_for_pfa(0.0, 1.0), std::domain_error);
    EXPECT_THROW(threshold_for_pfa(1.0, 1.0), std::domain_error);
}

TEST(FalseAlarm, ClosedForm) {
    EXPECT_EQ(p_fa_closed_form(0.0, 1.0), 1.0);
    EXPECT_EQ(p_fa_closed_form(std::numeric_limits<double>::infinity(), 1.0), 0.0);
    EXPECT_NEAR(p_fa_closed_form(1.6449, 1.0), 0.1, 1e-4);
    EXPECT_NEAR(p_fa_closed_form(1.6449, 1.0), 2.0 * oracle::gaussian_tail(1.6449), 1e-12);
    // Independent of M and of the fingerprints.
    const auto a = closed_form_errors(spread_profile(0.5, 0.8), std::vector<double>(5, 60.0));
    const auto b = closed_form_errors(AuthProfile::equal_priors({10.0}, 0.5, 0.8, kPrior, 1), std::vector<double>{5.0});
    EXPECT_EQ(a.p_fa, b.p_fa);
}

TEST(MissedDetection, ClosedForm) {
    const std::vector<double> eves{73.0, 78.0, 63.0, 77.0, 80.0};
    EXPECT_EQ(p_md_closed_form(spread_profile(0.5, 0.0), eves).value, 0.0);

    const double sigma = 0.4;
    const double eps = 0.5;
    const auto one = AuthProfile::equal_priors({66.0}, sigma, eps, kPrior, 1);
    const std::vector<double> same{66.0};
    EXPECT_NEAR(p_md_closed_form(one, same).value, 1.0 - p_fa_closed_form(eps, sigma), 1e-14);

    const auto prof = spread_profile(0.5, 0.8);
    const auto per_eve = p_md_closed_form(prof, eves, MissWeighting::per_eve);
    const auto divided = p_md_closed_form(prof, eves, MissWeighting::divided_by_m);
    EXPECT_NEAR(divided.raw, per_eve.raw / 5.0, 1e-15);
    EXPECT_FALSE(per_eve.clipped());
    EXPECT_THROW(p_md_closed_form(prof, std::vector<double>{70.0}), std::invalid_argument);
}

TEST(MissedDetection, ExpectedLimits) {
    EXPECT_EQ(p_md_expected(spread_profile(0.5, 0.0)).value, 0.0);
    // Vanishing noise: each window has width 2 eps inside the prior support.
    const auto tight = spread_profile(1e-6, 0.5);
    EXPECT_NEAR(p_md_expected(tight).value, 5.0 * 2.0 * 0.5 / kPrior.width(), 1e-6);
}

TEST(MissedDetection, ExpectedMatchesDirectIntegral) {
    const auto prof = spread_profile(0.6, 0.9);
    const auto truth = prof.ground_truth();
    const double ref = oracle::simpson(
                           [&](double psi) {
                               double s = 0.0;
                               for (double t : truth) {
                                   s += specfun::q_function((t - psi - 0.9) / 0.6) -
                                        specfun::q_function((t - psi + 0.9) / 0.6);
                               }
                               return s;
                           },
                           kPrior.psi_min_db, kPrior.psi_max_db, 400000) /
                       kPrior.width();
    EXPECT_NEAR(p_md_expected(prof).value, ref, 1e-8);
}

TEST(Misclassification, ClosedForm) {
    EXPECT_NEAR(p_mc_closed_form(spread_profile(1e-6, 0.5)), 0.0, 1e-15);

    const auto one = AuthProfile::equal_priors({78.0}, 1.5, 0.5, kPrior, 1);
    const double expected = 1.0 - (specfun::q_function((kPrior.psi_min_db - 78.0) / 1.5) -
                                   specfun::q_function((kPrior.psi_max_db - 78.0) / 1.5));
    EXPECT_NEAR(p_mc_closed_form(one), expected, 1e-14);

    auto truth = std::vector<double>{47.0, 62.0, 70.0, 74.0, 79.0};
    const double base = p_mc_closed_form(AuthProfile::equal_priors(truth, 1.0, 0.5, kPrior, 5));
    std::reverse(truth.begin(), truth.end());
    std::swap(truth[1], truth[3]);
    EXPECT_EQ(p_mc_closed_form(AuthProfile::equal_priors(truth, 1.0, 0.5, kPrior, 5)), base);
    for (double eps : {0.0, 0.1, 1.0, 5.0}) {
        EXPECT_EQ(p_mc_closed_form(AuthProfile::equal_priors(truth, 1.0, eps, kPrior, 5)), base);
    }
}

TEST(Misclassification, UnequalPriorsFollowSortedOrder) {
    // Priors travel with their fingerprint when sorting.
    const AuthProfile a({50.0, 52.0}, 1.0, 0.5, kPrior, {0.9, 0.1}, {1.0});
    const AuthProfile b({52.0, 50.0}, 1.0, 0.5, kPrior, {0.1, 0.9}, {1.0});
    EXPECT_NEAR(p_mc_closed_form(a), p_mc_closed_form(b), 1e-15);
}

TEST(Roc, Shape) {
    const auto prof = spread_profile(lq_db_to_sigma(10.0), 0.0);
    std::vector<double> grid;
    for (double p = 0.01; p < 1.0; p += 0.01) {
        grid.push_back(p);
    }
    const auto roc = roc_curve(prof, grid);
    ASSERT_EQ(roc.size(), grid.size());
    for (std::size_t i = 1; i < roc.size(); ++i) {
        EXPECT_GE(roc[i].p_d, roc[i - 1].p_d);
        EXPECT_LT(roc[i].epsilon, roc[i - 1].epsilon);
    }
    EXPECT_GT(roc.back().p_d, 0.999);
    const std::vector<double> tiny{1e-300};
    EXPECT_LT(roc_curve(prof, tiny).front().p_d, 0.5);
    const std::vector<double> bad{0.0};
    EXPECT_THROW(roc_curve(prof, bad), std::domain_error);
}

TEST(Roc, ImprovesWithLinkQuality) {
    const std::vector<double> grid{0.05, 0.1, 0.3};
    std::vector<double> prev(3, 0.0);
    for (double lq = 0.0; lq <= 20.0; lq += 2.5) {
        const auto roc = roc_curve(spread_profile(lq_db_to_sigma(lq), 0.0), grid);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_GE(roc[i].p_d, prev[i] - 1e-12) << lq;
            prev[i] = roc[i].p_d;
        }
    }
}
