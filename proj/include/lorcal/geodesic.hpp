#pragma once

// Maximizers and geodesics: closed-form lifts in flat models, longest paths
// in DAGs, and the admissible-tuple construction that builds the geodesic
// between two endpoints near a reference geodesic by repeated midpoint
// replacement inside a chain of timelike diamonds.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "lorcal/causal_dag.hpp"
#include "lorcal/core.hpp"
#include "lorcal/cylinder.hpp"
#include "lorcal/format.hpp"
#include "lorcal/io.hpp"
#include "lorcal/minkowski.hpp"
#include "lorcal/rng.hpp"
#include "lorcal/space.hpp"
#include "lorcal/tau_engine.hpp"

namespace lorcal {

// ---------------------------------------------------------------------------
// Closed-form geodesics

namespace detail {

inline double liftTau(const Point& a, const Point& b) { return minkowskiTau(b.t - a.t, b.x - a.x); }

/// Straight segment a -> b in the lifted chart, `segments` equal pieces,
/// parameters on [0, 1].
inline CausalCurve<Point> straightCurve(const Point& a, const Point& b, int segments) {
    std::vector<double> params;
    std::vector<Point> pts;
    for (int k = 0; k <= segments; ++k) {
        const double s = static_cast<double>(k) / segments;
        params.push_back(s);
        pts.push_back(k == 0 ? a : k == segments ? b : Point{a.t + s * (b.t - a.t), a.x + s * (b.x - a.x)});
    }
    return CausalCurve<Point>(std::move(params), std::move(pts));
}

template <FlatModel M>
inline constexpr bool kIsCylinder = std::is_same_v<M, Cylinder>;

}  // namespace detail

/// Lift of q used by the geodesic from p: the requested winding class on the
/// cylinder, otherwise the maximizing (nearest) lift.
template <FlatModel M>
Point geodesicTarget(const M& m, const Point& p, const Point& q, std::optional<long> winding = std::nullopt) {
    if constexpr (detail::kIsCylinder<M>) {
        return winding ? m.windingLift(p, q, *winding) : m.liftNear(q, p);
    } else {
        if (winding && *winding != 0) throw DomainError("winding classes exist only on the cylinder");
        return m.liftNear(q, p);
    }
}

/// Straight lift geodesic from p to q with parameters on [0, 1]; tau from
/// the start grows linearly in the parameter.
template <FlatModel M>
CausalCurve<Point> analyticGeodesic(const M& m, const Point& p, const Point& q,
                                    std::optional<long> winding = std::nullopt, int segments = 16) {
    requireFinite(p, "analyticGeodesic");
    requireFinite(q, "analyticGeodesic");
    if (segments < 1) throw DomainError("analyticGeodesic: segments must be >= 1");
    const Point target = geodesicTarget(m, p, q, winding);
    if (!(detail::liftTau(p, target) > 0)) {
        throw PreconditionError(winding ? "analyticGeodesic: winding class is not timelike"
                                        : "analyticGeodesic: endpoints are not chronologically related");
    }
    return detail::straightCurve(p, target, segments);
}

struct WindingGeodesic {
    long winding{};
    double length{};
    CausalCurve<Point> curve;
};

/// One geodesic per winding class with a timelike lift, longest first
/// (ties by winding number).
inline std::vector<WindingGeodesic> enumerateWindingGeodesics(const Cylinder& m, const Point& p,
                                                              const Point& q, int segments = 16) {
    requireFinite(p, "enumerateWindingGeodesics");
    requireFinite(q, "enumerateWindingGeodesics");
    std::vector<WindingGeodesic> out;
    const double dt = q.t - p.t;
    if (!(dt > 0)) return out;
    const long reach = static_cast<long>(std::ceil(dt / m.circumference())) + 1;
    for (long k = -reach; k <= reach; ++k) {
        const Point target = m.windingLift(p, q, k);
        const double len = detail::liftTau(p, target);
        if (len > 0) out.push_back({k, len, detail::straightCurve(p, target, segments)});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const WindingGeodesic& a, const WindingGeodesic& b) { return a.length > b.length; });
    return out;
}

/// Number of distinct timelike geodesic classes from p to q.
template <FlatModel M>
std::size_t geodesicCount(const M& m, const Point& p, const Point& q) {
    if constexpr (detail::kIsCylinder<M>) {
        return enumerateWindingGeodesics(m, p, q, 1).size();
    } else {
        return m.chrono(p, q) ? 1 : 0;
    }
}

/// Longest path from i to j (ties to the smallest predecessor id), as a
/// curve over node ids with parameters 0, 1, 2, ...
inline CausalCurve<NodeId> dagMaximizer(const CausalDag& g, NodeId i, NodeId j) {
    if (i.id >= g.size() || j.id >= g.size()) throw DomainError("dagMaximizer: node out of range");
    if (!(g.tau(i, j) > 0)) throw PreconditionError("dagMaximizer: nodes are not chronologically related");
    const SourcePass pass = longestFrom(g.graph(), i.id);
    std::vector<NodeId> path;
    for (std::size_t v = j.id; v != SourcePass::kNone; v = pass.pred[v]) {
        path.push_back({v});
        if (v == i.id) break;
    }
    std::reverse(path.begin(), path.end());
    std::vector<double> params(path.size());
    for (std::size_t k = 0; k < params.size(); ++k) params[k] = static_cast<double>(k);
    return CausalCurve<NodeId>(std::move(params), std::move(path));
}

// ---------------------------------------------------------------------------
// Diamond cover

/// Chain of timelike diamonds D(p_i, eps) = I(x_i, x_{i+1}) along a
/// reference geodesic alpha of length L = N eps, with alpha prolonged by
/// eps/2 at both ends to reach the padding events x_0 and x_{N+1}.
struct DiamondCover {
    double eps{};
    double delta{};
    std::size_t n{};
    double length{};
    /// alpha by tau arc length on [0, L].
    CausalCurve<Point> alpha;
    /// Prolongation on [-eps/2, L + eps/2].
    CausalCurve<Point> alphaTilde;
    /// p_i = alpha(i eps), i = 0..N.
    std::vector<Point> anchors;
    /// x_i = alphaTilde((i - 1/2) eps), i = 0..N+1.
    std::vector<Point> midpoints;

    Point padBefore() const { return midpoints.front(); }
    Point padAfter() const { return midpoints.back(); }

    Diamond<Point> diamond(std::size_t i) const { return {midpoints[i], midpoints[i + 1], DiamondKind::Open}; }
    Diamond<Point> closedDiamond(std::size_t i) const {
        return {midpoints[i], midpoints[i + 1], DiamondKind::Closed};
    }
    Diamond<Point> startNeighborhood() const { return diamond(0); }
    Diamond<Point> endNeighborhood() const { return diamond(n); }
};

struct CoverOptions {
    std::optional<double> epsRequest;
    std::size_t maxN = 1'000'000;
};

/// Chooses eps <= epsRequest with L = N eps, N >= 2, and 3 eps + delta below
/// the comparison radius for some delta > 0; pads alpha by straight
/// prolongation at parameter distance eps/2.
template <FlatModel M>
DiamondCover buildDiamondCover(const M& m, const CausalCurve<Point>& alphaIn, CoverOptions opt = {}) {
    requireCausal(m, alphaIn, true);
    if (opt.epsRequest && !(*opt.epsRequest > 0)) throw DomainError("buildDiamondCover: eps must be positive");

    // continuous lift, then reparameterize by tau arc length
    std::vector<Point> pts{alphaIn.first()};
    for (std::size_t k = 1; k < alphaIn.size(); ++k) pts.push_back(m.liftNear(alphaIn.points()[k], pts.back()));
    std::vector<double> arc{0.0};
    for (std::size_t k = 1; k < pts.size(); ++k) arc.push_back(arc.back() + detail::liftTau(pts[k - 1], pts[k]));
    const double length = arc.back();
    if (!(length > 0)) throw DomainError("buildDiamondCover: reference curve has zero length");
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        const double direct = detail::liftTau(pts[k - 1], pts[k + 1]);
        const double broken = arc[k + 1] - arc[k - 1];
        if (direct > broken + kTauTol * std::max(1.0, broken)) {
            throw PreconditionError("buildDiamondCover: reference curve is not a geodesic near sample " +
                                    std::to_string(k));
        }
    }

    const double radius = m.comparisonRadius();
    std::size_t n = 2;
    if (opt.epsRequest) {
        const double ratio = length / *opt.epsRequest;
        n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(ratio - 1e-9)));
    }
    while (!(3.0 * length / static_cast<double>(n) < radius)) {
        if (++n > opt.maxN) throw DomainError("buildDiamondCover: comparison radius too small for any N");
    }

    for (;; ++n) {
        if (n > opt.maxN) throw DomainError("buildDiamondCover: padded diamonds exceed the comparison radius for every N");
        DiamondCover cover;
        cover.n = n;
        cover.length = length;
        cover.eps = length / static_cast<double>(n);
        // any positive margin below the radius works; keep 1% slack
        cover.delta = isInfinite(radius) ? cover.eps : 0.99 * (radius - 3.0 * cover.eps);
        arc.back() = length;
        cover.alpha = CausalCurve<Point>(arc, pts);

        const double half = cover.eps / 2;
        auto along = [](const Point& a, const Point& b, double dist) {
            const double len = minkowskiTau(std::abs(b.t - a.t), b.x - a.x);
            return Point{a.t + (b.t - a.t) * dist / len, a.x + (b.x - a.x) * dist / len};
        };
        std::vector<Point> ext{along(pts[0], pts[1], -half)};
        std::vector<double> extParams{-half};
        ext.insert(ext.end(), pts.begin(), pts.end());
        extParams.insert(extParams.end(), arc.begin(), arc.end());
        const std::size_t last = pts.size() - 1;
        ext.push_back(along(pts[last], pts[last - 1], -half));
        extParams.push_back(length + half);
        cover.alphaTilde = CausalCurve<Point>(extParams, ext);

        for (std::size_t i = 0; i <= n; ++i) {
            cover.anchors.push_back(i == n ? pts.back() : evaluate(m, cover.alpha, static_cast<double>(i) * cover.eps));
        }
        for (std::size_t i = 0; i <= n + 1; ++i) {
            const double s = (static_cast<double>(i) - 0.5) * cover.eps;
            cover.midpoints.push_back(i == 0 ? ext.front() : i == n + 1 ? ext.back() : evaluate(m, cover.alphaTilde, s));
        }

        if (!m.chrono(cover.padBefore(), cover.anchors.front()) || !m.chrono(cover.anchors.back(), cover.padAfter())) {
            throw PreconditionError("buildDiamondCover: padding events are not chronologically related to alpha");
        }
        // Three consecutive diamonds must fit in one comparison neighborhood
        // without reaching around a compact direction; refine N until they do.
        const Point top = evaluate(m, cover.alphaTilde, 2.5 * cover.eps);
        const double padHeight = m.tau(cover.padBefore(), top);
        const double liftHeight = detail::liftTau(cover.padBefore(), top);
        if (padHeight < radius && padHeight <= liftHeight + kTauTol * std::max(1.0, liftHeight)) return cover;
    }
}

/// Uniform point of a diamond in null coordinates.
template <FlatModel M>
Point sampleInDiamond(const M& m, const Diamond<Point>& dia, Rng& rng) {
    const Point lo = dia.lo;
    const Point hi = m.liftNear(dia.hi, lo);
    const double u = rng.uniform(lo.t - lo.x, hi.t - hi.x);
    const double v = rng.uniform(lo.t + lo.x, hi.t + hi.x);
    return {(u + v) / 2, (v - u) / 2};
}

// ---------------------------------------------------------------------------
// Admissible-tuple ascent

enum class SweepMode { GaussSeidel, Jacobi };

struct AscentOptions {
    double tol = 1e-12;
    std::size_t maxIter = 100000;
    SweepMode mode = SweepMode::GaussSeidel;
    /// Starting tuple (a_0..a_N); defaults to the cover anchors.
    std::optional<std::vector<Point>> initial;
};

template <class E>
struct GeodesicResult {
    CausalCurve<E> curve;
    double length{};
    std::size_t iterations{};
    bool converged{};
    double maxResidual{};
    /// Final tuple a_0..a_N.
    std::vector<E> tuple;
    /// Sum of tau over the tuple after each sweep; index 0 is the start.
    std::vector<double> scoreHistory;
    /// max_i |tau(a_{i-1}, a_i) - tau(a_i, a_{i+1})|.
    double spacingResidual{};
};

namespace detail {

inline double tupleScore(const std::vector<Point>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) s += liftTau(a[i], a[i + 1]);
    return s;
}

/// Broken geodesic through the tuple, parameterized on [0, L] in
/// proportion to accumulated tau.
inline CausalCurve<Point> tupleCurve(const std::vector<Point>& a, double length) {
    std::vector<double> cum{0.0};
    for (std::size_t i = 1; i < a.size(); ++i) cum.push_back(cum.back() + liftTau(a[i - 1], a[i]));
    const double total = cum.back();
    std::vector<double> params;
    for (double c : cum) params.push_back(length * c / total);
    params.back() = length;
    return CausalCurve<Point>(std::move(params), a);
}

}  // namespace detail

/// Maximizes sum tau(a_i, a_{i+1}) over admissible tuples with a_0 = p,
/// a_N = q and a_i in the closed diamond of p_i, by replacing interior
/// points with the midpoint of the maximizer between their neighbors until
/// no point moves by more than `tol` (in d). A replacement is only kept if
/// it does not lower the score.
template <FlatModel M>
GeodesicResult<Point> tupleAscent(const M& m, const DiamondCover& cover, const Point& p, const Point& q,
                                  const AscentOptions& opt = {}) {
    if (!diamondContains(m, cover.startNeighborhood(), p)) {
        throw PreconditionError("tupleAscent: p is not in D(p_0, eps)");
    }
    if (!diamondContains(m, cover.endNeighborhood(), q)) {
        throw PreconditionError("tupleAscent: q is not in D(p_N, eps)");
    }
    if (!m.chrono(p, q)) throw PreconditionError("tupleAscent: p and q are not chronologically related");
    if (!(opt.tol > 0)) throw DomainError("tupleAscent: tol must be positive");

    const std::size_t n = cover.n;
    std::vector<Point> a;
    if (opt.initial) {
        if (opt.initial->size() != n + 1) throw DomainError("tupleAscent: initial tuple has the wrong length");
        a = *opt.initial;
        if (!(a.front() == p) || !(a.back() == q)) {
            throw PreconditionError("tupleAscent: initial tuple must start at p and end at q");
        }
    } else {
        a = cover.anchors;
        a.front() = p;
        a.back() = q;
    }
    for (std::size_t i = 0; i <= n; ++i) {
        a[i] = m.liftNear(a[i], cover.anchors[i]);
        if (i > 0 && i < n && !diamondContains(m, cover.closedDiamond(i), a[i])) {
            throw CoverViolation("tupleAscent: initial a_" + std::to_string(i) + " is not admissible", i);
        }
    }

    GeodesicResult<Point> res;
    double score = detail::tupleScore(a);
    res.scoreHistory.push_back(score);

    // Near the fixed point a move of size h changes the score by O(h^2),
    // below the rounding of the sum. Losses within that rounding bound are
    // accepted; the recorded score is the running maximum, so the history
    // stays exactly nondecreasing.
    const auto slack = [n](double s) { return 4.0 * static_cast<double>(n + 1) * kMachineEps * std::abs(s); };

    auto candidate = [&](const std::vector<Point>& from, std::size_t i) {
        Point c = m.segmentPoint(from[i - 1], from[i + 1], 0.5);
        c = m.liftNear(c, cover.anchors[i]);
        if (!diamondContains(m, cover.closedDiamond(i), c)) {
            throw CoverViolation("tupleAscent: a_" + std::to_string(i) + " left its closed diamond", i);
        }
        return c;
    };

    for (std::size_t it = 0; it < opt.maxIter; ++it) {
        double maxMove = 0.0;
        bool gaussSeidel = opt.mode == SweepMode::GaussSeidel;
        if (!gaussSeidel) {
            std::vector<Point> next = a;
            double move = 0.0;
            for (std::size_t i = 1; i < n; ++i) {
                next[i] = candidate(a, i);
                move = std::max(move, m.d(a[i], next[i]));
            }
            const double nextScore = detail::tupleScore(next);
            if (nextScore >= score - slack(score)) {
                a = std::move(next);
                score = std::max(score, nextScore);
                maxMove = move;
            } else {
                gaussSeidel = true;  // simultaneous update lost score; redo this sweep pointwise
            }
        }
        if (gaussSeidel) {
            for (std::size_t i = 1; i < n; ++i) {
                const Point c = candidate(a, i);
                const Point old = a[i];
                a[i] = c;
                const double nextScore = detail::tupleScore(a);
                // a rejected move still counts, so a stalled sweep cannot pass as converged
                maxMove = std::max(maxMove, m.d(old, c));
                if (nextScore >= score - slack(score)) {
                    score = std::max(score, nextScore);
                } else {
                    a[i] = old;
                }
            }
        }
        if (score < res.scoreHistory.back()) throw Error("tupleAscent: score decreased");
        res.scoreHistory.push_back(score);
        res.iterations = it + 1;
        res.maxResidual = maxMove;
        if (maxMove < opt.tol) {
            res.converged = true;
            break;
        }
    }
    if (n < 2) res.converged = true;

    res.tuple = a;
    res.length = detail::tupleScore(a);
    res.curve = detail::tupleCurve(a, cover.length);
    for (std::size_t i = 1; i < n; ++i) {
        res.spacingResidual = std::max(
            res.spacingResidual, std::abs(detail::liftTau(a[i - 1], a[i]) - detail::liftTau(a[i], a[i + 1])));
    }
    return res;
}

struct InclusionReport {
    bool ok{true};
    std::size_t gridPoints{};
    std::optional<double> firstFailure;

    explicit operator bool() const noexcept { return ok; }
};

/// Checks gamma(t) in D(alphaTilde(t), eps) on a uniform grid over [0, L]
/// (default 64 N points).
template <FlatModel M>
InclusionReport verifyInclusionClaim(const M& m, const DiamondCover& cover, const CausalCurve<Point>& gamma,
                                     std::size_t gridPoints = 0) {
    if (gridPoints == 0) gridPoints = 64 * cover.n;
    if (gridPoints < 2) throw DomainError("verifyInclusionClaim: need at least two grid points");
    const CausalCurve<Point> g = gamma.rescaled(0.0, cover.length);
    InclusionReport rep;
    rep.gridPoints = gridPoints;
    for (std::size_t j = 0; j < gridPoints; ++j) {
        const double t = j + 1 == gridPoints ? cover.length
                                             : cover.length * static_cast<double>(j) / static_cast<double>(gridPoints - 1);
        const auto dia = shiftedDiamond(m, cover.alphaTilde, t, cover.eps);
        if (!diamondContains(m, dia, evaluate(m, g, t))) {
            rep.ok = false;
            rep.firstFailure = t;
            return rep;
        }
    }
    return rep;
}

template <FlatModel M>
InclusionReport verifyInclusionClaim(const M& m, const DiamondCover& cover, const GeodesicResult<Point>& result,
                                     std::size_t gridPoints = 0) {
    return verifyInclusionClaim(m, cover, result.curve, gridPoints);
}

// ---------------------------------------------------------------------------
// Spacing equalization

/// Iterates A_i <- (A_{i-1} + A_{i+1}) / 2 with the ends pinned (all
/// interior points updated from the previous sweep) until the remaining
/// distance to the fixed point is below `tol`. Stopping uses the spectral
/// bound of the iteration, |error| <= sqrt(N-1) * change * rho / (1 - rho)
/// with rho = cos(pi / N), so a small change alone never ends it early.
inline std::vector<double> equalizeSpacing(std::vector<double> a, double tol = 1e-10,
                                           std::size_t maxIter = 10'000'000) {
    if (a.size() < 2) throw DomainError("equalizeSpacing: need at least two values");
    if (!(tol > 0)) throw DomainError("equalizeSpacing: tol must be positive");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i])) throw DomainError("equalizeSpacing: non-finite value");
        if (i > 0 && !(a[i] > a[i - 1])) throw DomainError("equalizeSpacing: values must be strictly increasing");
    }
    const std::size_t n = a.size() - 1;
    if (n < 2) return a;
    const double rho = std::cos(std::numbers::pi / static_cast<double>(n));
    const double gain = std::sqrt(static_cast<double>(n - 1)) * rho / (1.0 - rho);
    std::vector<double> next = a;
    // Once the bound is met, keep sweeping while the step still shrinks so
    // the result settles at the floating-point fixed point. Before that, a
    // step that stops shrinking for n^2 sweeps means rounding noise has won;
    // the closed-form check below then decides.
    const std::size_t window = n * n + 16;
    double prev = kInfinity;
    bool bounded = false;
    std::size_t stalled = 0;
    std::size_t it = 0;
    for (; it < maxIter; ++it) {
        double change = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            next[i] = (a[i - 1] + a[i + 1]) / 2;
            change = std::max(change, std::abs(next[i] - a[i]));
        }
        a.swap(next);
        if (change == 0.0) break;
        const bool shrinking = change < prev;
        prev = std::min(prev, change);
        if (bounded && !shrinking) break;
        bounded = bounded || change * gain < tol;
        stalled = shrinking ? 0 : stalled + 1;
        if (stalled > window) break;
    }
    if (it == maxIter) throw Error("equalizeSpacing: no convergence within the iteration limit");
    for (std::size_t i = 0; i <= n; ++i) {
        const double limit = (static_cast<double>(i) * a[n] + static_cast<double>(n - i) * a[0]) / static_cast<double>(n);
        if (!(std::abs(a[i] - limit) < 10 * tol)) throw Error("equalizeSpacing: fixed point misses the closed-form limit");
    }
    return a;
}

// ---------------------------------------------------------------------------
// Continuity of the geodesic map

/// Largest d between two curves sampled at matching relative parameters.
template <GeodesicModel M>
double supDistance(const M& m, const CausalCurve<typename M::event_type>& c1,
                   const CausalCurve<typename M::event_type>& c2, std::size_t grid = 257) {
    double sup = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
        const double u = static_cast<double>(j) / static_cast<double>(grid - 1);
        const double s1 = j + 1 == grid ? c1.back() : c1.front() + u * (c1.back() - c1.front());
        const double s2 = j + 1 == grid ? c2.back() : c2.front() + u * (c2.back() - c2.front());
        sup = std::max(sup, m.d(evaluate(m, c1, s1), evaluate(m, c2, s2)));
    }
    return sup;
}

struct ContinuityRow {
    double perturbation{};
    double supDistance{};
    double length{};
    bool converged{};
};

struct ContinuityReport {
    double baseLength{};
    std::vector<ContinuityRow> rows;
    /// supDistance is nondecreasing in the perturbation size.
    bool monotone{true};
    /// max supDistance / perturbation over nonzero perturbations.
    double maxRatio{};
};

struct ProbeOptions {
    std::optional<double> epsRequest;
    AscentOptions ascent{};
};

/// Solves for the geodesic between each perturbed endpoint pair inside the
/// base geodesic's diamond cover and measures its distance to the base one.
template <FlatModel M>
ContinuityReport geodesicMapProbe(const M& m, const Point& x, const Point& y,
                                  const std::vector<std::pair<Point, Point>>& perturbations,
                                  const ProbeOptions& opt = {}) {
    if (!m.chrono(x, y)) throw PreconditionError("geodesicMapProbe: x and y are not chronologically related");
    const auto alpha = analyticGeodesic(m, x, y);
    CoverOptions co;
    co.epsRequest = opt.epsRequest;
    const DiamondCover cover = buildDiamondCover(m, alpha, co);
    const auto base = tupleAscent(m, cover, x, m.liftNear(y, cover.anchors.back()), opt.ascent);

    ContinuityReport rep;
    rep.baseLength = base.length;
    for (const auto& [xp, yp] : perturbations) {
        if (!diamondContains(m, cover.startNeighborhood(), xp) || !diamondContains(m, cover.endNeighborhood(), yp)) {
            throw OutOfNeighborhoodError("geodesicMapProbe: perturbed endpoints leave U_0 / U_L");
        }
        if (!m.chrono(xp, yp)) throw PreconditionError("geodesicMapProbe: perturbed pair is not chronological");
        const auto res = tupleAscent(m, cover, xp, yp, opt.ascent);
        ContinuityRow row;
        row.perturbation = std::max(m.d(x, xp), m.d(y, yp));
        row.supDistance = supDistance(m, res.curve, base.curve);
        row.length = res.length;
        row.converged = res.converged;
        rep.rows.push_back(row);
        if (row.perturbation > 0) rep.maxRatio = std::max(rep.maxRatio, row.supDistance / row.perturbation);
    }
    std::vector<ContinuityRow> sorted = rep.rows;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ContinuityRow& a, const ContinuityRow& b) { return a.perturbation < b.perturbation; });
    for (std::size_t k = 1; k < sorted.size(); ++k) {
        if (sorted[k].supDistance < sorted[k - 1].supDistance) rep.monotone = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Homotopy straightening

/// Replaces every member of an s-indexed family of timelike curves by the
/// geodesic between its endpoints. On the cylinder the lift (winding class)
/// is carried along from s = 0 by moving each endpoint to the lift nearest
/// its predecessor; members that already are geodesics are returned as is.
template <FlatModel M>
std::vector<CausalCurve<Point>> straightenHomotopy(const M& m, const std::vector<CausalCurve<Point>>& family) {
    if (family.empty()) return {};
    const double trackRadius = m.comparisonRadius() / 4;
    auto walkEnd = [&](const CausalCurve<Point>& c, const Point& start) {
        Point cur = start;
        for (std::size_t k = 1; k < c.size(); ++k) cur = m.liftNear(c.points()[k], cur);
        return cur;
    };

    std::vector<CausalCurve<Point>> out;
    Point start{}, end{};
    for (std::size_t s = 0; s < family.size(); ++s) {
        const CausalCurve<Point>& c = family[s];
        requireCausal(m, c, true);
        const Point rawStart = c.first();
        if (s == 0) {
            start = rawStart;
            end = walkEnd(c, start);
        } else {
            const Point nextStart = m.liftNear(rawStart, start);
            const Point nextEnd = m.liftNear(c.last(), end);
            if (!(m.d(start, nextStart) < trackRadius) || !(m.d(end, nextEnd) < trackRadius)) {
                throw TrackingError("straightenHomotopy: endpoints jump too far at s = " + std::to_string(s), s);
            }
            const Point own = walkEnd(c, nextStart);
            if (!(std::abs(own.x - nextEnd.x) < trackRadius)) {
                throw TrackingError("straightenHomotopy: member " + std::to_string(s) + " changes winding class", s);
            }
            start = nextStart;
            end = nextEnd;
        }
        const double liftLen = detail::liftTau(start, end);
        if (!(liftLen > 0)) {
            throw PreconditionError("straightenHomotopy: no timelike geodesic in the tracked class at s = " +
                                    std::to_string(s));
        }
        // chart in which this member's first sample has its own coordinates
        const Point shift{0.0, rawStart.x - start.x};
        const Point a = rawStart;
        const Point b = m.liftNear(c.last(), Point{end.t, end.x + shift.x});

        double broken = 0.0;
        Point cur = c.first();
        for (std::size_t k = 1; k < c.size(); ++k) {
            const Point nxt = m.liftNear(c.points()[k], cur);
            broken += detail::liftTau(cur, nxt);
            cur = nxt;
        }
        if (std::abs(broken - liftLen) <= kTauTol * std::max(1.0, liftLen)) {
            out.push_back(c);
            continue;
        }
        const int segments = static_cast<int>(c.size()) - 1;
        out.push_back(detail::straightCurve(a, b, segments).rescaled(c.front(), c.back()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Export

/// Event table of the curve followed by "#length <v> #converged <bool> #iters <n>".
inline void writeGeodesic(std::ostream& out, const GeodesicResult<Point>& r) {
    writeEvents(out, r.curve.points());
    out << "#length " << formatDouble(r.length) << " #converged " << (r.converged ? "true" : "false") << " #iters "
        << r.iterations << '\n';
}

/// DAG path as an event table: embedding coordinates when present,
/// otherwise (accumulated tau, 0); the node id is always written.
inline void writeGeodesic(std::ostream& out, const CausalDag& g, const CausalCurve<NodeId>& path) {
    std::vector<EventRow> rows;
    double acc = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const NodeId v = path.points()[k];
        if (k > 0) acc += g.tau(path.points()[k - 1], v);
        const Point p = g.coords() ? (*g.coords())[v.id] : Point{acc, 0.0};
        rows.push_back({p, v.id});
    }
    writeEvents(out, rows);
    out << "#length " << formatDouble(acc) << " #converged true #iters 1\n";
}

}  // namespace lorcal
