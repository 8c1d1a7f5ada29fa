// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "raftsec/channel.hpp"
#include "raftsec/consensus_sim.hpp"
#include "raftsec/coverage.hpp"
#include "raftsec/geometry.hpp"

using namespace raftsec;
using namespace raftsec::coverage;
using geometry::AnnulusRegion;

namespace {

const double kRhoT = 15.0 / (std::numbers::pi * 500.0 * 500.0);

// Regression value of L(r = 100, beta = -20 dB, gamma = 0.01) on the reference
// annulus, frozen from the u-integral oracle and a PPP Monte Carlo estimate.
constexpr double kLaplaceStar = 0.996918587473;

// Reference scenario at beta = -20 dB, frozen from the closed form and confirmed by
// Monte Carlo below.
constexpr double kPdlStar = 0.99492967867;
constexpr double kPulStar = 0.977466759621;

}  // namespace

TEST(Laplace, NoJammers) {
    EXPECT_EQ(laplace_interference(100.0, 0.01, 0.01, 0.0, 3.0, AnnulusRegion(0.0, 300.0)), 1.0);
}

TEST(Laplace, VanishingThreshold) {
    EXPECT_NEAR(laplace_interference(100.0, 1e-12, 0.01, kRhoT, 3.0, AnnulusRegion(0.0, 300.0)), 1.0, 1e-6);
    EXPECT_NEAR(laplace_interference(100.0, 1e-12, 0.01, kRhoT, 3.0, AnnulusRegion(10.0, 300.0)), 1.0, 1e-6);
}

TEST(Laplace, FrozenValueAgainstOracles) {
    const AnnulusRegion ring(0.0, 300.0);
    const double l = laplace_interference(100.0, 0.01, 0.01, kRhoT, 3.0, ring);
    EXPECT_NEAR(l, kLaplaceStar, 1e-11);
    EXPECT_NEAR(l, oracle::laplace_u_integral(100.0, 0.01, 0.01, kRhoT, 3.0, 0.0, 300.0), 1e-9);

    // E[exp(-s I)] over PPP positions and Rayleigh fading.
    Engine rng(99);
    const int draws = 1000000;
    double sum = 0.0;
    double sum2 = 0.0;
    const double k = 0.01 * 0.01 * std::pow(100.0, 3.0);
    for (int i = 0; i < draws; ++i) {
        double si = 0.0;
        for (const auto& x : geometry::sample_ppp(kRhoT, ring, rng)) {
            si += k * channel::sample_fading(rng).gain / std::pow(x.norm(), 3.0);
        }
        const double v = std::exp(-si);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
    EXPECT_NEAR(l, mean, 4.0 * se);
}

TEST(Laplace, ClosedFormMatchesQuadratureGrid) {
    for (double alpha : {2.5, 3.0, 4.0}) {
        for (double beta_db : {-30.0, -20.0, -10.0, 0.0}) {
            for (double z1 : {10.0, 50.0, 150.0}) {
                for (double r : {10.0, 100.0, 400.0}) {
                    const double beta = channel::db_to_linear(beta_db);
                    const AnnulusRegion ring(z1, z1 + 50.0);
                    const double cf = laplace_interference(r, beta, 0.01, kRhoT, alpha, ring, LaplaceRoute::closed_form);
                    const double q = laplace_interference(r, beta, 0.01, kRhoT, alpha, ring, LaplaceRoute::quadrature);
                    EXPECT_NEAR(cf, q, 1e-8) << alpha << ' ' << beta_db << ' ' << z1 << ' ' << r;
                    EXPECT_NEAR(q, oracle::laplace_u_integral(r, beta, 0.01, kRhoT, alpha, z1, z1 + 50.0), 1e-8);
                }
            }
        }
    }
}

TEST(Laplace, ZeroInnerRadiusLimit) {
    // The closed form's z1 -> 0 limit and the quadrature route agree.
    for (double r : {5.0, 100.0, 600.0}) {
        const AnnulusRegion ring(0.0, 300.0);
        const double cf = laplace_interference(r, 0.5, 0.1, kRhoT, 3.0, ring, LaplaceRoute::closed_form);
        const double q = laplace_interference(r, 0.5, 0.1, kRhoT, 3.0, ring, LaplaceRoute::quadrature);
        EXPECT_NEAR(cf, q, 1e-9) << r;
    }
}

TEST(Laplace, MonotoneAndBounded) {
    const AnnulusRegion ring(0.0, 300.0);
    double prev = 1.0;
    for (double beta_db = -40.0; beta_db <= 20.0; beta_db += 5.0) {
        const double v = laplace_interference(100.0, channel::db_to_linear(beta_db), 0.01, kRhoT, 3.0, ring);
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, prev);
        prev = v;
    }
    prev = 1.0;
    for (double m : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const double v = laplace_interference(100.0, 0.1, 0.01, m * kRhoT, 3.0, ring);
        EXPECT_LE(v, prev);
        prev = v;
    }
    prev = 1.0;
    for (double r : {1.0, 10.0, 50.0, 100.0, 200.0, 400.0}) {
        const double v = laplace_interference(r, 0.1, 0.01, kRhoT, 3.0, ring);
        EXPECT_LE(v, prev);
        prev = v;
    }
    EXPECT_EQ(laplace_interference(100.0, std::numeric_limits<double>::infinity(), 0.01, kRhoT, 3.0, ring), 0.0);
}

TEST(Coverage, NoJammersIsOne) {
    auto p = channel::reference_params();
    p.rho_j = 0.0;
    const auto r = coverage_joint(p);
    EXPECT_NEAR(r.p_dl, 1.0, 1e-8);
    EXPECT_NEAR(r.p_ul, 1.0, 1e-8);
    EXPECT_NEAR(r.p_joint, 1.0, 1e-8);
    EXPECT_EQ(r.method, Method::closed_form);
}

TEST(Coverage, HighThresholdCollapses) {
    auto p = channel::reference_params();
    p.beta_dl_db = 60.0;
    EXPECT_LT(coverage_dl(p), 0.05);
    p.beta_dl_db = std::numeric_limits<double>::infinity();
    EXPECT_EQ(coverage_dl(p), 0.0);
}

TEST(Coverage, FrozenReferenceValues) {
    const auto p = channel::reference_params();
    const auto r = coverage_joint(p);
    EXPECT_NEAR(r.p_dl, kPdlStar, 1e-9);
    EXPECT_NEAR(r.p_ul, kPulStar, 1e-9);
    EXPECT_DOUBLE_EQ(r.p_joint, r.p_dl * r.p_ul);

    const auto mc = sim::estimate_coverage({100000, 3, p, 1});
    EXPECT_NEAR(mc.p_dl, kPdlStar, 0.02);
    EXPECT_NEAR(mc.p_ul, kPulStar, 0.02);
}

TEST(Coverage, RoutesAgree) {
    auto p = channel::reference_params();
    p.jam_annulus = AnnulusRegion(20.0, 300.0);
    const double a = coverage_dl(p, {LaplaceRoute::closed_form});
    const double b = coverage_dl(p, {LaplaceRoute::quadrature});
    EXPECT_NEAR(a, b, 1e-8);
}

TEST(Coverage, MonotoneInThresholdAndJammers) {
    auto p = channel::reference_params();
    double prev_dl = 1.0;
    double prev_ul = 1.0;
    for (double b = -30.0; b <= 10.0; b += 5.0) {
        p.beta_dl_db = b;
        p.beta_ul_db = b;
        const auto r = coverage_joint(p);
        EXPECT_LE(r.p_dl, prev_dl);
        EXPECT_LE(r.p_ul, prev_ul);
        prev_dl = r.p_dl;
        prev_ul = r.p_ul;
    }
    p = channel::reference_params();
    prev_dl = 1.0;
    for (double m : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        p.rho_j = m * p.rho_t;
        const double v = coverage_dl(p);
        EXPECT_LE(v, prev_dl);
        prev_dl = v;
    }
}

TEST(Coverage, UplinkFallsWithJammerPower) {
    auto p = channel::reference_params();
    double prev = 1.0;
    for (double pj : {0.0, 5.0, 10.0, 15.0, 20.0}) {
        p.p_jammer_dbm = pj;
        const double v = coverage_ul(p);
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(Coverage, OuterRadiusTail) {
    const double r = outer_radius(kRhoT);
    EXPECT_LT(std::exp(-kRhoT * std::numbers::pi * r * r), 1e-13);
}
