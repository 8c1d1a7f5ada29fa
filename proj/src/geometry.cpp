// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#include "raftsec/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace raftsec::geometry {
namespace {

// Points produced by the samplers may sit on the boundary up to rounding.
constexpr double kBoundarySlack = 1e-9;

struct RadialBounds {
    double inner;
    double outer;
};

RadialBounds bounds_of(const Region& region) {
    return std::visit(
        [](const auto& r) -> RadialBounds {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, DiskRegion>) {
                return {0.0, r.radius()};
            } else {
                return {r.inner(), r.outer()};
            }
        },
        region);
}

}  // namespace

double Point2D::norm() const { return std::hypot(x, y); }

double distance(const Point2D& a, const Point2D& b) { return std::hypot(a.x - b.x, a.y - b.y); }

DiskRegion::DiskRegion(double radius) : radius_(radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("DiskRegion: radius must be positive and finite");
    }
}

double DiskRegion::area() const noexcept { return std::numbers::pi * radius_ * radius_; }

bool DiskRegion::contains(const Point2D& p) const noexcept {
    return p.norm() <= radius_ * (1.0 + kBoundarySlack);
}

AnnulusRegion::AnnulusRegion(double z1, double z2) : z1_(z1), z2_(z2) {
    if (!std::isfinite(z1) || !std::isfinite(z2) || !(z1 >= 0.0) || !(z1 < z2)) {
        throw std::invalid_argument("AnnulusRegion: annulus needs 0 <= z1 < z2");
    }
}

double AnnulusRegion::area() const noexcept { return std::numbers::pi * (z2_ * z2_ - z1_ * z1_); }

bool AnnulusRegion::contains(const Point2D& p) const noexcept {
    const double r = p.norm();
    return r >= z1_ * (1.0 - kBoundarySlack) && r <= z2_ * (1.0 + kBoundarySlack);
}

double area(const Region& region) {
    return std::visit([](const auto& r) { return r.area(); }, region);
}

bool contains(const Region& region, const Point2D& p) {
    return std::visit([&](const auto& r) { return r.contains(p); }, region);
}

std::vector<Point2D> sample_uniform(const Region& region, std::size_t count, Engine& rng) {
    const auto [z1, z2] = bounds_of(region);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point2D> points;
    points.reserve(count);
    const double z1_sq = z1 * z1;
    const double span_sq = z2 * z2 - z1_sq;
    for (std::size_t i = 0; i < count; ++i) {
        // Inverse CDF of the radius, P[R <= r] = (r^2 - z1^2) / (z2^2 - z1^2).
        const double r = std::sqrt(z1_sq + unit(rng) * span_sq);
        const double theta = 2.0 * std::numbers::pi * unit(rng);
        points.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    return points;
}

std::vector<Point2D> sample_ppp(double intensity, const Region& region, Engine& rng) {
    if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
        throw std::domain_error("sample_ppp: intensity must be non-negative and finite");
    }
    if (intensity == 0.0) {
        return {};
    }
    std::poisson_distribution<std::size_t> count(intensity * area(region));
    return sample_uniform(region, count(rng), rng);
}

double distance_pdf(double r, double rho_t) {
    if (!(r >= 0.0) || !(rho_t > 0.0)) {
        throw std::domain_error("distance_pdf: need r >= 0 and rho_t > 0");
    }
    return 2.0 * std::numbers::pi * rho_t * r * std::exp(-rho_t * std::numbers::pi * r * r);
}

double sample_nearest_distance(double rho_t, Engine& rng) {
    if (!(rho_t > 0.0)) {
        throw std::domain_error("sample_nearest_distance: rho_t must be positive");
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // 1 - U lies in (0, 1], so the logarithm is finite.
    return std::sqrt(-std::log(1.0 - unit(rng)) / (std::numbers::pi * rho_t));
}

void Deployment::validate(const DiskRegion& follower_region, const AnnulusRegion& jammer_region) const {
    if (leader != Point2D{}) {
        throw std::invalid_argument("Deployment: leader must sit at the origin");
    }
    if (!(follower_intensity >= 0.0) || !(jammer_intensity >= 0.0)) {
        throw std::invalid_argument("Deployment: intensities must be non-negative");
    }
    for (const auto& f : followers) {
        if (!std::isfinite(f.x) || !std::isfinite(f.y) || !follower_region.contains(f)) {
            throw std::invalid_argument("Deployment: follower outside the follower disk");
        }
    }
    for (const auto& j : jammers) {
        if (!std::isfinite(j.x) || !std::isfinite(j.y) || !jammer_region.contains(j)) {
            throw std::invalid_argument("Deployment: jammer outside the jamming annulus");
        }
    }
}

}  // namespace raftsec::geometry
