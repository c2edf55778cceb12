#pragma once

// Shared vocabulary: events, error types, tolerances and the model concepts
// every other header builds on.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

namespace lorcal {

/// Global absolute tolerance for checks on exact analytic models.
inline constexpr double kTauTol = 1e-9;

/// Sentinel for an infinite time separation or an unbounded comparison radius.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

inline bool isInfinite(double v) { return std::isinf(v) && v > 0; }

/// A point of a continuum model in (time, space) coordinates.
struct Point {
    double t{};
    double x{};

    friend bool operator==(const Point&, const Point&) = default;
};

/// A node of a causal DAG.
struct NodeId {
    std::size_t id{};

    friend bool operator==(const NodeId&, const NodeId&) = default;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// Model-agnostic event, used where the model kind is only known at runtime.
using Event = std::variant<Point, NodeId>;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (parameter range, bounds).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Event representation does not match the model (continuum vs node).
class RepresentationError : public Error {
public:
    using Error::Error;
};

class AcyclicityError : public Error {
public:
    using Error::Error;
};

/// Consecutive curve samples are not causally related.
class CausalityViolation : public Error {
public:
    CausalityViolation(const std::string& what, std::size_t index)
        : Error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The tuple ascent left the closed diamond of its anchor.
class CoverViolation : public Error {
public:
    CoverViolation(const std::string& what, std::size_t index)
        : Error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// More than one timelike geodesic joins a queried pair.
class AmbiguityError : public Error {
public:
    using Error::Error;
};

/// Side lengths violate the reverse triangle inequality.
class RealizabilityError : public Error {
public:
    using Error::Error;
};

class TrackingError : public Error {
public:
    TrackingError(const std::string& what, std::size_t s) : Error(what), s_(s) {}
    std::size_t familyIndex() const noexcept { return s_; }

private:
    std::size_t s_;
};

class OutOfNeighborhoodError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Concepts

/// A Lorentzian pre-length space: background metric, causal and
/// chronological relations, time separation and comparison radius.
template <class M>
concept SpaceModel = requires(const M& m, const typename M::event_type& a,
                              const typename M::event_type& b) {
    typename M::event_type;
    { m.d(a, b) } -> std::convertible_to<double>;
    { m.causal(a, b) } -> std::same_as<bool>;
    { m.chrono(a, b) } -> std::same_as<bool>;
    { m.tau(a, b) } -> std::convertible_to<double>;
    { m.comparisonRadius() } -> std::convertible_to<double>;
};

/// A model whose curves interpolate between samples and which can produce
/// points along the local maximizer between two chronologically related
/// events.
template <class M>
concept GeodesicModel = SpaceModel<M> && requires(const M& m, const typename M::event_type& a,
                                                  const typename M::event_type& b, double s) {
    { m.interpolate(a, b, s) } -> std::same_as<typename M::event_type>;
    { m.segmentPoint(a, b, s) } -> std::same_as<typename M::event_type>;
};

/// A flat 1+1 continuum model (Minkowski strip, cylinder). Geodesics are
/// straight lines in a lifted chart; liftNear picks the representative of
/// an event closest to a reference event in that chart.
template <class M>
concept FlatModel = GeodesicModel<M> && std::same_as<typename M::event_type, Point> &&
                    requires(const M& m, const Point& a, const Point& b) {
                        { m.liftNear(a, b) } -> std::same_as<Point>;
                        { m.normalize(a) } -> std::same_as<Point>;
                        { m.timeReversed() };
                        { m.reflect(a) } -> std::same_as<Point>;
                        { m.extent() } -> std::convertible_to<double>;
                    };

inline void requireFinite(const Point& p, const char* what) {
    if (!std::isfinite(p.t) || !std::isfinite(p.x)) {
        throw DomainError(std::string(what) + ": non-finite coordinates");
    }
}

}  // namespace lorcal
