#pragma once

#include <cmath>

#include "lorcal/core.hpp"
#include "lorcal/rng.hpp"

namespace lorcal {

/// Time separation of a displacement (dt, dx) in 1+1 Minkowski space.
inline double minkowskiTau(double dt, double dx) {
    dx = std::abs(dx);
    if (!(dt > dx)) return 0.0;
    return std::sqrt((dt - dx) * (dt + dx));
}

/// b - a as a rounded difference plus its exact rounding error (TwoSum).
struct ExactDiff {
    double value;
    double error;
};
inline ExactDiff exactDiff(double b, double a) {
    const double s = b - a;
    const double z = s - b;
    return {s, (b - (s - z)) + (-a - z)};
}

/// Light-cone coordinates u = dt - |dx|, v = dt + |dx|. Rounding of the
/// coordinate differences is carried along, so u keeps full relative
/// accuracy next to the light cone where the plain difference cancels.
struct ConeGap {
    double u;
    double v;
};
inline ConeGap coneGap(ExactDiff dt, ExactDiff dx) {
    if (dx.value < 0) dx = {-dx.value, -dx.error};
    return {(dt.value - dx.value) + (dt.error - dx.error), (dt.value + dx.value) + (dt.error + dx.error)};
}
inline double coneTau(const ConeGap& g) { return g.u > 0 ? std::sqrt(g.u * g.v) : 0.0; }

/// 1+1 Minkowski space restricted to a coordinate strip. The bounds only
/// matter for sampling; relations and tau are evaluated on any finite point.
class MinkowskiStrip {
public:
    using event_type = Point;

    struct Bounds {
        double tMin{0.0};
        double tMax{1.0};
        double xMin{0.0};
        double xMax{1.0};
    };

    explicit MinkowskiStrip(Bounds b) : b_(b) {
        if (!std::isfinite(b.tMin) || !std::isfinite(b.tMax) || !std::isfinite(b.xMin) ||
            !std::isfinite(b.xMax)) {
            throw DomainError("MinkowskiStrip: bounds must be finite");
        }
        if (!(b.tMin < b.tMax) || !(b.xMin < b.xMax)) {
            throw DomainError("MinkowskiStrip: degenerate bounds");
        }
    }

    const Bounds& bounds() const noexcept { return b_; }
    double area() const noexcept { return (b_.tMax - b_.tMin) * (b_.xMax - b_.xMin); }

    double d(const Point& a, const Point& b) const { return std::hypot(b.t - a.t, b.x - a.x); }

    bool causal(const Point& a, const Point& b) const { return gap(a, b).u >= 0; }
    bool chrono(const Point& a, const Point& b) const { return gap(a, b).u > 0; }
    double tau(const Point& a, const Point& b) const { return coneTau(gap(a, b)); }

    /// The whole strip is a comparison neighborhood.
    double comparisonRadius() const noexcept { return kInfinity; }

    Point interpolate(const Point& a, const Point& b, double s) const {
        return {a.t + s * (b.t - a.t), a.x + s * (b.x - a.x)};
    }
    Point segmentPoint(const Point& a, const Point& b, double s) const { return interpolate(a, b, s); }

    Point liftNear(const Point& e, const Point&) const { return e; }
    Point normalize(const Point& e) const { return e; }

    /// t -> -t; tau(a,b) here equals timeReversed().tau(reflect(b), reflect(a)).
    MinkowskiStrip timeReversed() const {
        return MinkowskiStrip({-b_.tMax, -b_.tMin, b_.xMin, b_.xMax});
    }
    Point reflect(const Point& e) const { return {-e.t, e.x}; }

    /// Typical displacement scale for sampling.
    double extent() const noexcept { return b_.tMax - b_.tMin; }

    Point sample(Rng& rng) const {
        return {rng.uniform(b_.tMin, b_.tMax), rng.uniform(b_.xMin, b_.xMax)};
    }

private:
    static ConeGap gap(const Point& a, const Point& b) {
        return coneGap(exactDiff(b.t, a.t), exactDiff(b.x, a.x));
    }

    Bounds b_;
};

inline MinkowskiStrip buildMinkowski(MinkowskiStrip::Bounds b) { return MinkowskiStrip(b); }

}  // namespace lorcal
