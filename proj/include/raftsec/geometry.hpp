// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "raftsec/rng.hpp"

namespace raftsec::geometry {

struct Point2D {
    double x = 0.0;
    double y = 0.0;

    double norm() const;
    friend bool operator==(const Point2D&, const Point2D&) = default;
};

double distance(const Point2D& a, const Point2D& b);

/// Disk of the given radius centred on the origin.
class DiskRegion {
public:
    explicit DiskRegion(double radius);

    double radius() const noexcept { return radius_; }
    double area() const noexcept;
    bool contains(const Point2D& p) const noexcept;

private:
    double radius_;
};

/// Annulus z1 <= |x| <= z2 centred on the origin; z1 = 0 gives a disk.
class AnnulusRegion {
public:
    AnnulusRegion(double z1, double z2);

    double inner() const noexcept { return z1_; }
    double outer() const noexcept { return z2_; }
    double area() const noexcept;
    bool contains(const Point2D& p) const noexcept;

private:
    double z1_;
    double z2_;
};

using Region = std::variant<DiskRegion, AnnulusRegion>;

double area(const Region& region);
bool contains(const Region& region, const Point2D& p);

/// `count` points uniform over the region (a PPP conditioned on its count).
std::vector<Point2D> sample_uniform(const Region& region, std::size_t count, Engine& rng);

/// Homogeneous Poisson point process of the given intensity (nodes/m^2).
std::vector<Point2D> sample_ppp(double intensity, const Region& region, Engine& rng);

/// Density of the distance from the origin to the nearest point of a PPP of
/// intensity rho_t: 2 pi rho_t r exp(-rho_t pi r^2).
double distance_pdf(double r, double rho_t);

/// Draw from distance_pdf by inversion.
double sample_nearest_distance(double rho_t, Engine& rng);

/// Leader at the origin, followers in a disk, jammers in an annulus.
struct Deployment {
    Point2D leader{};
    std::vector<Point2D> followers;
    std::vector<Point2D> jammers;
    double follower_intensity = 0.0;
    double jammer_intensity = 0.0;

    /// Throws std::invalid_argument on any violated invariant.
    void validate(const DiskRegion& follower_region, const AnnulusRegion& jammer_region) const;
};

}  // namespace raftsec::geometry
