#pragma once

// Numerical concavity checks of the time separation along pairs of
// maximizers, and flat comparison triangles.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lorcal/core.hpp"
#include "lorcal/format.hpp"
#include "lorcal/geodesic.hpp"
#include "lorcal/minkowski.hpp"
#include "lorcal/space.hpp"
#include "lorcal/tau_engine.hpp"

namespace lorcal {

inline constexpr std::size_t kDefaultConcavityGrid = 129;

struct ConcavitySample {
    double t{};
    double value{};
    double bound{};
    double slack{};
};

struct ConcavityReport {
    std::string check;
    std::vector<ConcavitySample> samples;
    double minSlack{kInfinity};
    double argminT{};
    double tolerance{kTauTol};
    bool pass{true};
    /// Secondary figures (two-sided slack, chord constants, ...).
    std::map<std::string, double> extras;
    /// Set when some slack falls below -tolerance.
    std::string certificate;

    std::string toText() const {
        std::ostringstream os;
        os << "check: " << check << '\n'
           << "pass: " << (pass ? "true" : "false") << '\n'
           << "grid: " << samples.size() << '\n'
           << "min_slack: " << formatDouble(minSlack) << '\n'
           << "argmin_t: " << formatDouble(argminT) << '\n'
           << "tolerance: " << formatDouble(tolerance) << '\n';
        for (const auto& [k, v] : extras) os << k << ": " << formatDouble(v) << '\n';
        if (!certificate.empty()) os << "certificate: " << certificate << '\n';
        return os.str();
    }
};

namespace detail {

inline std::vector<double> unitGrid(std::size_t grid) {
    if (grid < 3) throw DomainError("concavity grid needs at least three points");
    std::vector<double> ts(grid);
    for (std::size_t j = 0; j < grid; ++j) ts[j] = static_cast<double>(j) / static_cast<double>(grid - 1);
    ts.back() = 1.0;
    return ts;
}

inline void addSample(ConcavityReport& r, double t, double value, double bound) {
    const double slack = value - bound;
    r.samples.push_back({t, value, bound, slack});
    if (slack < r.minSlack) {
        r.minSlack = slack;
        r.argminT = t;
    }
}

inline double interiorMinSlack(const ConcavityReport& r) {
    double m = kInfinity;
    for (std::size_t j = 1; j + 1 < r.samples.size(); ++j) m = std::min(m, r.samples[j].slack);
    return m;
}

template <class M>
bool sameEvent(const M& m, const Point& a, const Point& b) {
    return m.d(a, b) == 0.0;
}

inline void requireUnitDomain(const CausalCurve<Point>& c) {
    if (c.front() != 0.0 || c.back() != 1.0) {
        throw DomainError("curves must be parameterized on [0, 1]");
    }
}

}  // namespace detail

/// g(t, s) = tau(alpha(t), gamma(t + s)).
template <GeodesicModel M>
double shiftedSeparation(const M& m, const CausalCurve<Point>& alpha, const CausalCurve<Point>& gamma, double t,
                         double s) {
    return m.tau(evaluate(m, alpha, t), evaluate(m, gamma, t + s));
}

/// Two maximizers on [0, 1] whose initial and final points are each
/// chronologically related or equal. Null maximizers are allowed.
struct MaximizerPair {
    CausalCurve<Point> alpha;
    CausalCurve<Point> beta;
    bool startsEqual{};
    bool endsEqual{};
};

template <FlatModel M>
MaximizerPair makeMaximizerPair(const M& m, CausalCurve<Point> alpha, CausalCurve<Point> beta) {
    detail::requireUnitDomain(alpha);
    detail::requireUnitDomain(beta);
    for (const auto* c : {&alpha, &beta}) {
        requireCausal(m, *c, false);
        const double full = m.tau(c->first(), c->last());
        if (std::abs(tauLength(m, *c) - full) > kTauTol * std::max(1.0, full)) {
            throw PreconditionError("maximizer pair: curve is not a maximizer");
        }
    }
    MaximizerPair pair{std::move(alpha), std::move(beta), false, false};
    pair.startsEqual = detail::sameEvent(m, pair.alpha.first(), pair.beta.first());
    pair.endsEqual = detail::sameEvent(m, pair.alpha.last(), pair.beta.last());
    if (!pair.startsEqual && !m.chrono(pair.alpha.first(), pair.beta.first())) {
        throw PreconditionError("maximizer pair: alpha(0) must equal or precede beta(0) chronologically");
    }
    if (!pair.endsEqual && !m.chrono(pair.alpha.last(), pair.beta.last())) {
        throw PreconditionError("maximizer pair: alpha(1) must equal or precede beta(1) chronologically");
    }
    return pair;
}

/// tau(alpha(t), beta(t)) >= t tau(alpha(1), beta(1)) + (1 - t) tau(alpha(0), beta(0))
/// on a uniform grid.
template <FlatModel M>
ConcavityReport checkConcavity(const M& m, const MaximizerPair& pair, std::size_t grid = kDefaultConcavityGrid,
                               double tol = kTauTol) {
    detail::requireUnitDomain(pair.alpha);
    detail::requireUnitDomain(pair.beta);
    const double height = m.tau(pair.alpha.first(), pair.beta.last());
    if (!(height < m.comparisonRadius())) {
        throw PreconditionError("checkConcavity: curves do not fit a common comparison neighborhood");
    }
    ConcavityReport r;
    r.check = "local-concavity";
    r.tolerance = tol;
    const double start = m.tau(pair.alpha.first(), pair.beta.first());
    const double end = m.tau(pair.alpha.last(), pair.beta.last());
    for (double t : detail::unitGrid(grid)) {
        const Point a = evaluate(m, pair.alpha, t);
        const Point b = evaluate(m, pair.beta, t);
        const double value = m.tau(a, b);
        const double bound = t * end + (1 - t) * start;
        detail::addSample(r, t, value, bound);
        if (value - bound < -tol && r.certificate.empty()) {
            r.certificate = "t=" + formatDouble(t) + " alpha(t)=" + formatPoint(a) + " beta(t)=" + formatPoint(b) +
                            " tau(alpha(t),beta(t))=" + formatDouble(value) + " tau(alpha(0),beta(0))=" +
                            formatDouble(start) + " tau(alpha(1),beta(1))=" + formatDouble(end) +
                            " bound=" + formatDouble(bound);
        }
    }
    r.pass = r.minSlack >= -tol;
    return r;
}

/// tau(gamma_{x,y0}(t), gamma_{x,y1}(t)) >= t tau(y0, y1), plus the two-sided
/// form with initial points x and x1 = gamma_{x,y0}(1/4):
/// tau(gamma_{x,y0}(t), gamma_{x1,y1}(t)) >= t tau(y0, y1) + (1 - t) tau(x, x1).
template <FlatModel M>
ConcavityReport checkGlobalConcavity(const M& m, const Point& x, const Point& y0, const Point& y1,
                                     std::size_t grid = kDefaultConcavityGrid, double tol = kTauTol) {
    if (!m.chrono(x, y0) || !m.chrono(y0, y1)) {
        throw PreconditionError("checkGlobalConcavity: need x << y0 << y1");
    }
    for (const auto& [a, b] : {std::pair{x, y0}, std::pair{x, y1}, std::pair{y0, y1}}) {
        if (geodesicCount(m, a, b) > 1) {
            throw AmbiguityError("checkGlobalConcavity: more than one timelike geodesic from " + formatPoint(a) +
                                 " to " + formatPoint(b));
        }
    }
    const auto g0 = analyticGeodesic(m, x, y0);
    const auto g1 = analyticGeodesic(m, x, y1);
    const double top = m.tau(y0, y1);

    ConcavityReport r;
    r.check = "global-concavity";
    r.tolerance = tol;
    const auto ts = detail::unitGrid(grid);
    for (double t : ts) {
        const Point a = evaluate(m, g0, t);
        const Point b = evaluate(m, g1, t);
        const double value = m.tau(a, b);
        detail::addSample(r, t, value, t * top);
        if (value - t * top < -tol && r.certificate.empty()) {
            r.certificate = "t=" + formatDouble(t) + " value=" + formatDouble(value) + " bound=" + formatDouble(t * top);
        }
    }
    r.extras["interior_min_slack"] = detail::interiorMinSlack(r);

    const Point x1 = evaluate(m, g0, 0.25);
    if (geodesicCount(m, x1, y1) > 1) throw AmbiguityError("checkGlobalConcavity: ambiguous geodesic from x1 to y1");
    const auto g2 = analyticGeodesic(m, x1, y1);
    const double bottom = m.tau(x, x1);
    double twoSided = kInfinity;
    for (double t : ts) {
        const double value = m.tau(evaluate(m, g0, t), evaluate(m, g2, t));
        twoSided = std::min(twoSided, value - (t * top + (1 - t) * bottom));
    }
    r.extras["two_sided_min_slack"] = twoSided;
    r.pass = r.minSlack >= -tol && twoSided >= -tol;
    return r;
}

/// f(t) = tau(gamma1(t), gamma2(t + eps)) on [0, L - eps]: positivity, the
/// chord bound f(t) >= t/(L-eps) l1 + (L-eps-t)/(L-eps) l2 with
/// l1 = f(L - eps), l2 = f(0), and midpoint concavity on the grid.
template <FlatModel M>
ConcavityReport checkShiftedConcavity(const M& m, const CausalCurve<Point>& gamma1, const CausalCurve<Point>& gamma2,
                                      double eps, std::size_t grid = kDefaultConcavityGrid, double tol = kTauTol) {
    const double t0 = gamma1.front();
    const double len = gamma1.back() - t0;
    if (gamma2.front() != t0 || gamma2.back() != gamma1.back()) {
        throw DomainError("checkShiftedConcavity: curves must share a parameter domain");
    }
    if (!(eps > 0) || !(eps < len)) throw DomainError("checkShiftedConcavity: eps out of range");
    const double span = len - eps;
    auto f = [&](double t) { return shiftedSeparation(m, gamma1, gamma2, t0 + t, eps); };
    const double l1 = f(span);
    const double l2 = f(0.0);

    ConcavityReport r;
    r.check = "shifted-concavity";
    r.tolerance = tol;
    double minF = kInfinity;
    std::vector<double> values;
    for (double u : detail::unitGrid(grid)) {
        const double t = u * span;
        const double value = f(t);
        values.push_back(value);
        minF = std::min(minF, value);
        detail::addSample(r, t, value, (t / span) * l1 + ((span - t) / span) * l2);
    }
    double midpoint = kInfinity;
    for (std::size_t j = 1; j + 1 < values.size(); ++j) {
        midpoint = std::min(midpoint, values[j] - (values[j - 1] + values[j + 1]) / 2);
    }
    r.extras["l1"] = l1;
    r.extras["l2"] = l2;
    r.extras["min_f"] = minF;
    r.extras["midpoint_min_slack"] = midpoint;
    r.pass = r.minSlack >= -tol && midpoint >= -tol && minF > 0;
    if (!r.pass) {
        r.certificate = "argmin_t=" + formatDouble(r.argminT) + " min_f=" + formatDouble(minF) +
                        " midpoint_min_slack=" + formatDouble(midpoint);
    }
    return r;
}

/// Midpoint concavity of t -> tau(alpha(t), gamma(t)) (or tau(gamma(t),
/// alpha(t)) when gamma lies in the past of alpha at both ends).
template <FlatModel M>
ConcavityReport checkPartD(const M& m, const CausalCurve<Point>& alpha, const CausalCurve<Point>& gamma,
                           std::size_t grid = kDefaultConcavityGrid, double tol = kTauTol) {
    if (alpha.front() != gamma.front() || alpha.back() != gamma.back()) {
        throw DomainError("checkPartD: curves must share a parameter domain");
    }
    auto relatedOrEqual = [&](const Point& a, const Point& b) { return detail::sameEvent(m, a, b) || m.chrono(a, b); };
    bool reversed = false;
    if (relatedOrEqual(alpha.first(), gamma.first()) && relatedOrEqual(alpha.last(), gamma.last())) {
        reversed = false;
    } else if (m.chrono(gamma.first(), alpha.first()) && m.chrono(gamma.last(), alpha.last())) {
        reversed = true;
    } else {
        throw PreconditionError("checkPartD: endpoint configuration not covered");
    }
    const double t0 = alpha.front();
    const double len = alpha.back() - t0;
    std::vector<double> ts, values;
    for (double u : detail::unitGrid(grid)) {
        const double t = t0 + u * len;
        const Point a = evaluate(m, alpha, t);
        const Point g = evaluate(m, gamma, t);
        ts.push_back(t);
        values.push_back(reversed ? m.tau(g, a) : m.tau(a, g));
    }
    ConcavityReport r;
    r.check = "part-d-concavity";
    r.tolerance = tol;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const bool interior = j > 0 && j + 1 < values.size();
        const double bound = interior ? (values[j - 1] + values[j + 1]) / 2 : values[j];
        detail::addSample(r, ts[j], values[j], bound);
    }
    r.pass = r.minSlack >= -tol;
    if (!r.pass) r.certificate = "t=" + formatDouble(r.argminT) + " slack=" + formatDouble(r.minSlack);
    return r;
}

// ---------------------------------------------------------------------------
// Comparison triangles

/// Flat realization of a timelike triangle with a = tau(x,y), b = tau(x,z),
/// c = tau(y,z).
struct ComparisonTriangle {
    double a{}, b{}, c{};
    Point x, y, z;
};

inline ComparisonTriangle realizeComparisonTriangle(double a, double b, double c) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
        throw DomainError("realizeComparisonTriangle: non-finite side");
    }
    if (!(a > 0) || !(c > 0)) throw DomainError("realizeComparisonTriangle: sides a and c must be positive");
    if (b < a + c) throw RealizabilityError("realizeComparisonTriangle: b < a + c violates the reverse triangle inequality");
    const double tc = (b * b + a * a - c * c) / (2 * b);
    const double s = std::sqrt(std::max(0.0, (tc - a) * (tc + a)));
    return {a, b, c, Point{0.0, 0.0}, Point{tc, s}, Point{b, 0.0}};
}

}  // namespace lorcal
