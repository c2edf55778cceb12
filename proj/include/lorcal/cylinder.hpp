#pragma once

#include <algorithm>
#include <cmath>

#include "lorcal/core.hpp"
#include "lorcal/minkowski.hpp"
#include "lorcal/rng.hpp"

namespace lorcal {

/// Flat Lorentzian cylinder R x (R / C Z). Events may carry unwrapped
/// spatial coordinates; every relation reduces the angular difference
/// modulo C, so (t, x) and (t, x + C) denote the same event.
class Cylinder {
public:
    using event_type = Point;

    Cylinder(double circumference, double tMin, double tMax)
        : c_(circumference), tMin_(tMin), tMax_(tMax) {
        if (!(circumference > 0) || !std::isfinite(circumference)) {
            throw DomainError("Cylinder: circumference must be positive and finite");
        }
        if (!std::isfinite(tMin) || !std::isfinite(tMax) || !(tMin < tMax)) {
            throw DomainError("Cylinder: degenerate time bounds");
        }
    }

    double circumference() const noexcept { return c_; }
    double tMin() const noexcept { return tMin_; }
    double tMax() const noexcept { return tMax_; }
    double area() const noexcept { return (tMax_ - tMin_) * c_; }

    /// Representative of dx in [0, C).
    double wrap(double dx) const {
        double r = std::fmod(dx, c_);
        if (r < 0) r += c_;
        if (r >= c_) r = 0.0;
        return r;
    }
    /// Distance from dx to the nearest multiple of C, in [0, C/2].
    /// Exact: fmod is exact and C - r is exact for r in [C/2, C].
    double nearestOffset(double dx) const {
        const double r = std::fmod(std::abs(dx), c_);
        return r <= c_ / 2 ? r : c_ - r;
    }

    double d(const Point& a, const Point& b) const {
        return std::hypot(b.t - a.t, nearestOffset(b.x - a.x));
    }

    bool causal(const Point& a, const Point& b) const { return gap(a, b).u >= 0; }
    bool chrono(const Point& a, const Point& b) const { return gap(a, b).u > 0; }
    /// Maximum over winding lifts; the nearest lift always attains it.
    double tau(const Point& a, const Point& b) const { return coneTau(gap(a, b)); }

    /// Diamonds of tau-height below C do not wrap.
    double comparisonRadius() const noexcept { return c_; }

    Point interpolate(const Point& a, const Point& b, double s) const {
        return {a.t + s * (b.t - a.t), a.x + s * (b.x - a.x)};
    }
    /// Point at fraction s along the maximizing (nearest) lift from a to b.
    Point segmentPoint(const Point& a, const Point& b, double s) const {
        return interpolate(a, liftNear(b, a), s);
    }

    Point liftNear(const Point& e, const Point& ref) const {
        const double k = std::round((ref.x - e.x) / c_);
        return {e.t, e.x + k * c_};
    }
    Point normalize(const Point& e) const { return {e.t, wrap(e.x)}; }

    /// Lift of q reached from p by winding class k: x = p.x + wrap(q.x - p.x) + kC.
    Point windingLift(const Point& p, const Point& q, long k) const {
        return {q.t, p.x + wrap(q.x - p.x) + static_cast<double>(k) * c_};
    }

    Cylinder timeReversed() const { return Cylinder(c_, -tMax_, -tMin_); }
    Point reflect(const Point& e) const { return {-e.t, e.x}; }

    /// Typical displacement scale for sampling; long enough to wrap twice.
    double extent() const noexcept { return std::max(tMax_ - tMin_, 2 * c_); }

    Point sample(Rng& rng) const { return {rng.uniform(tMin_, tMax_), rng.uniform(0.0, c_)}; }

private:
    /// Cone coordinates toward the nearest lift of b. The offset is exact
    /// apart from the rounding of b.x - a.x, which is carried along.
    ConeGap gap(const Point& a, const Point& b) const {
        ExactDiff dx = exactDiff(b.x, a.x);
        if (dx.value < 0) dx = {-dx.value, -dx.error};
        const double r = std::fmod(dx.value, c_);
        const ExactDiff offset = r <= c_ / 2 ? ExactDiff{r, dx.error} : ExactDiff{c_ - r, -dx.error};
        return coneGap(exactDiff(b.t, a.t), offset);
    }

    double c_;
    double tMin_;
    double tMax_;
};

inline Cylinder buildCylinder(double circumference, double tMin, double tMax) {
    return Cylinder(circumference, tMin, tMax);
}

}  // namespace lorcal
