#pragma once

// Curves and diamonds over any SpaceModel.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lorcal/core.hpp"

namespace lorcal {

enum class Orientation { Future, Past };

/// A finitely sampled causal curve. Between samples the curve follows the
/// owning model's coordinate interpolation.
template <class E>
class CausalCurve {
public:
    CausalCurve() = default;

    CausalCurve(std::vector<double> params, std::vector<E> points,
                Orientation orientation = Orientation::Future)
        : params_(std::move(params)), points_(std::move(points)), orientation_(orientation) {
        if (params_.size() != points_.size()) {
            throw DomainError("CausalCurve: parameter and point counts differ");
        }
        if (params_.size() < 2) {
            throw DomainError("CausalCurve: need at least two samples");
        }
        for (std::size_t i = 0; i < params_.size(); ++i) {
            if (!std::isfinite(params_[i])) throw DomainError("CausalCurve: non-finite parameter");
            if (i > 0 && !(params_[i] > params_[i - 1])) {
                throw DomainError("CausalCurve: parameters must be strictly increasing");
            }
            if constexpr (std::is_same_v<E, Point>) requireFinite(points_[i], "CausalCurve");
        }
    }

    const std::vector<double>& params() const noexcept { return params_; }
    const std::vector<E>& points() const noexcept { return points_; }
    Orientation orientation() const noexcept { return orientation_; }
    std::size_t size() const noexcept { return points_.size(); }

    double front() const { return params_.front(); }
    double back() const { return params_.back(); }
    const E& first() const { return points_.front(); }
    const E& last() const { return points_.back(); }

    /// Same points, parameters mapped affinely onto [lo, hi].
    CausalCurve rescaled(double lo, double hi) const {
        std::vector<double> p(params_.size());
        const double a = params_.front();
        const double span = params_.back() - a;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = lo + (hi - lo) * (params_[i] - a) / span;
        p.front() = lo;
        p.back() = hi;
        return CausalCurve(std::move(p), points_, orientation_);
    }

private:
    std::vector<double> params_;
    std::vector<E> points_;
    Orientation orientation_{Orientation::Future};
};

/// Checks that consecutive samples are related in orientation order; with
/// `timelike` the relation must be chronological. Throws CausalityViolation
/// carrying the index of the first offending sample.
template <SpaceModel M>
void requireCausal(const M& m, const CausalCurve<typename M::event_type>& c, bool timelike = false) {
    const auto& pts = c.points();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto& a = c.orientation() == Orientation::Future ? pts[i] : pts[i + 1];
        const auto& b = c.orientation() == Orientation::Future ? pts[i + 1] : pts[i];
        const bool ok = timelike ? m.chrono(a, b) : m.causal(a, b);
        if (!ok) {
            throw CausalityViolation("curve samples " + std::to_string(i) + " and " +
                                         std::to_string(i + 1) +
                                         (timelike ? " are not chronologically related"
                                                   : " are not causally related"),
                                     i);
        }
    }
}

/// Evaluates the curve at parameter s, interpolating between samples.
template <GeodesicModel M>
typename M::event_type evaluate(const M& m, const CausalCurve<typename M::event_type>& c, double s) {
    const auto& ps = c.params();
    if (!(s >= ps.front() && s <= ps.back())) {
        throw DomainError("curve parameter " + std::to_string(s) + " outside [" +
                          std::to_string(ps.front()) + ", " + std::to_string(ps.back()) + "]");
    }
    auto it = std::upper_bound(ps.begin(), ps.end(), s);
    if (it == ps.end()) return c.last();
    const std::size_t hi = static_cast<std::size_t>(it - ps.begin());
    const std::size_t lo = hi - 1;
    if (s == ps[lo]) return c.points()[lo];
    const double frac = (s - ps[lo]) / (ps[hi] - ps[lo]);
    return m.interpolate(c.points()[lo], c.points()[hi], frac);
}

enum class DiamondKind { Open, Closed };

/// Order interval I(lo,hi) (open) or J(lo,hi) (closed).
template <class E>
struct Diamond {
    E lo;
    E hi;
    DiamondKind kind{DiamondKind::Open};
};

template <SpaceModel M>
Diamond<typename M::event_type> makeDiamond(const M& m, const typename M::event_type& lo,
                                            const typename M::event_type& hi,
                                            DiamondKind kind = DiamondKind::Open) {
    const bool ok = kind == DiamondKind::Open ? m.chrono(lo, hi) : m.causal(lo, hi);
    if (!ok) throw DomainError("diamond tips are not related as required by its kind");
    return {lo, hi, kind};
}

template <SpaceModel M>
bool diamondContains(const M& m, const Diamond<typename M::event_type>& dia,
                     const typename M::event_type& e) {
    if (dia.kind == DiamondKind::Open) return m.chrono(dia.lo, e) && m.chrono(e, dia.hi);
    return m.causal(dia.lo, e) && m.causal(e, dia.hi);
}

/// D(gamma(t), eps) = I(gamma(t - eps/2), gamma(t + eps/2)).
template <GeodesicModel M>
Diamond<typename M::event_type> shiftedDiamond(const M& m,
                                               const CausalCurve<typename M::event_type>& c,
                                               double t, double eps,
                                               DiamondKind kind = DiamondKind::Open) {
    if (!(eps > 0)) throw DomainError("shiftedDiamond: eps must be positive");
    const double a = t - eps / 2;
    const double b = t + eps / 2;
    if (a < c.front() || b > c.back()) {
        throw DomainError("shiftedDiamond: [t - eps/2, t + eps/2] leaves the curve's parameter range");
    }
    return makeDiamond(m, evaluate(m, c, a), evaluate(m, c, b), kind);
}

}  // namespace lorcal
