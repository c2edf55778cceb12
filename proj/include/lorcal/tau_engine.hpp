#pragma once

// Time-separation kernels: max-plus longest paths on DAGs, the tau-length
// of sampled curves, and sampled axiom audits for continuum models.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lorcal/core.hpp"
#include "lorcal/format.hpp"
#include "lorcal/rng.hpp"
#include "lorcal/space.hpp"

namespace lorcal {

struct Edge {
    std::size_t from{};
    std::size_t to{};
    double weight{};

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted directed graph with nonnegative weights.
class Digraph {
public:
    Digraph() = default;

    Digraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        out_.assign(n_, {});
        for (std::size_t k = 0; k < edges_.size(); ++k) {
            const Edge& e = edges_[k];
            if (e.from >= n_ || e.to >= n_) throw DomainError("Digraph: edge endpoint out of range");
            if (!(e.weight >= 0) || !std::isfinite(e.weight)) {
                throw DomainError("Digraph: edge weights must be finite and nonnegative");
            }
            out_[e.from].push_back(k);
        }
        order_ = topologicalOrder();
    }

    std::size_t size() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<std::size_t>& outEdges(std::size_t u) const { return out_[u]; }
    /// Topological order; ties resolved by smallest node id.
    const std::vector<std::size_t>& order() const noexcept { return order_; }

    Digraph reversed() const {
        std::vector<Edge> r;
        r.reserve(edges_.size());
        for (const Edge& e : edges_) r.push_back({e.to, e.from, e.weight});
        return Digraph(n_, std::move(r));
    }

private:
    std::vector<std::size_t> topologicalOrder() const {
        std::vector<std::size_t> indeg(n_, 0);
        for (const Edge& e : edges_) ++indeg[e.to];
        // min-heap on node id keeps the order deterministic
        std::vector<std::size_t> ready;
        for (std::size_t v = 0; v < n_; ++v)
            if (indeg[v] == 0) ready.push_back(v);
        std::make_heap(ready.begin(), ready.end(), std::greater<>{});
        std::vector<std::size_t> order;
        order.reserve(n_);
        while (!ready.empty()) {
            std::pop_heap(ready.begin(), ready.end(), std::greater<>{});
            const std::size_t u = ready.back();
            ready.pop_back();
            order.push_back(u);
            for (std::size_t k : out_[u]) {
                if (--indeg[edges_[k].to] == 0) {
                    ready.push_back(edges_[k].to);
                    std::push_heap(ready.begin(), ready.end(), std::greater<>{});
                }
            }
        }
        if (order.size() != n_) throw AcyclicityError("edge relation contains a directed cycle");
        return order;
    }

    std::size_t n_{0};
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::size_t> order_;
};

/// Result of one per-source longest-path pass.
struct SourcePass {
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    /// Max path weight from the source, -inf if unreachable.
    std::vector<double> best;
    /// Predecessor on a maximizing path; smallest id among ties.
    std::vector<std::size_t> pred;

    bool reaches(std::size_t v) const { return best[v] != -std::numeric_limits<double>::infinity(); }
};

inline SourcePass longestFrom(const Digraph& g, std::size_t src) {
    const std::size_t n = g.size();
    SourcePass pass;
    pass.best.assign(n, -std::numeric_limits<double>::infinity());
    pass.pred.assign(n, SourcePass::kNone);
    pass.best[src] = 0.0;
    bool started = false;
    for (std::size_t u : g.order()) {
        if (u == src) started = true;
        if (!started || !pass.reaches(u)) continue;
        for (std::size_t k : g.outEdges(u)) {
            const Edge& e = g.edges()[k];
            const double cand = pass.best[u] + e.weight;
            if (cand > pass.best[e.to] || (cand == pass.best[e.to] && u < pass.pred[e.to])) {
                pass.best[e.to] = cand;
                pass.pred[e.to] = u;
            }
        }
    }
    return pass;
}

/// Dense n x n table of time separations.
class TauTable {
public:
    TauTable() = default;
    explicit TauTable(std::size_t n) : n_(n), values_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) { values_[i * n_ + j] = v; }

    friend bool operator==(const TauTable&, const TauTable&) = default;

private:
    std::size_t n_{0};
    std::vector<double> values_;
};

/// Reflexive-transitive closure of the edge relation as a dense bit table.
class Reachability {
public:
    Reachability() = default;
    explicit Reachability(std::size_t n) : n_(n), bits_(n * n, 0) {
        for (std::size_t i = 0; i < n; ++i) set(i, i);
    }
    std::size_t size() const noexcept { return n_; }
    bool at(std::size_t i, std::size_t j) const { return bits_[i * n_ + j] != 0; }
    void set(std::size_t i, std::size_t j) { bits_[i * n_ + j] = 1; }

private:
    std::size_t n_{0};
    std::vector<std::uint8_t> bits_;
};

struct AllPairs {
    TauTable tau;
    Reachability reach;
};

/// All-pairs max-plus longest paths by one DP pass per source over the
/// topological order: O(n * (n + |E|)).
inline AllPairs longestPathAllPairs(const Digraph& g) {
    const std::size_t n = g.size();
    AllPairs out{TauTable(n), Reachability(n)};
    for (std::size_t s = 0; s < n; ++s) {
        const SourcePass pass = longestFrom(g, s);
        for (std::size_t v = 0; v < n; ++v) {
            if (!pass.reaches(v)) continue;
            out.reach.set(s, v);
            out.tau.set(s, v, pass.best[v]);
        }
    }
    return out;
}

inline TauTable longestPathTau(const Digraph& g) { return longestPathAllPairs(g).tau; }

// ---------------------------------------------------------------------------
// tau-length

/// Partition sum of tau over the curve's samples, each segment refined
/// `refinement`-fold by interpolation. This is an upper bound for the
/// tau-length; it never increases as the partition is refined. Discrete
/// models have nothing to interpolate, so refinement is ignored there.
template <SpaceModel M>
double tauLength(const M& m, const CausalCurve<typename M::event_type>& c, int refinement = 1) {
    if (refinement < 1) throw DomainError("tauLength: refinement must be >= 1");
    requireCausal(m, c);
    const bool future = c.orientation() == Orientation::Future;
    double sum = 0.0;
    const auto& pts = c.points();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto prev = pts[i];
        for (int k = 1; k <= refinement; ++k) {
            auto next = pts[i + 1];
            if constexpr (GeodesicModel<M>) {
                if (k < refinement) next = m.interpolate(pts[i], pts[i + 1], static_cast<double>(k) / refinement);
            } else {
                k = refinement;
            }
            sum += future ? m.tau(prev, next) : m.tau(next, prev);
            prev = next;
        }
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Axiom audit

/// Violation counts per axiom, with the first witness of each kind.
struct AuditReport {
    std::string model;
    std::uint64_t pairsChecked{0};
    std::uint64_t triplesChecked{0};
    std::uint64_t reverseTriangle{0};
    std::uint64_t positivity{0};      // tau > 0 <=> chrono
    std::uint64_t chronoInCausal{0};  // chrono => causal
    std::uint64_t pushUp{0};
    std::uint64_t reflexivity{0};
    std::uint64_t transitivity{0};
    std::string reverseTriangleWitness;
    std::string positivityWitness;
    std::string chronoInCausalWitness;
    std::string pushUpWitness;
    std::string reflexivityWitness;
    std::string transitivityWitness;

    std::uint64_t violations() const {
        return reverseTriangle + positivity + chronoInCausal + pushUp + reflexivity + transitivity;
    }
    bool ok() const { return violations() == 0; }

    std::string toText() const {
        std::ostringstream os;
        os << "model: " << model << '\n'
           << "pairs_checked: " << pairsChecked << '\n'
           << "triples_checked: " << triplesChecked << '\n'
           << "reverse_triangle: " << reverseTriangle << '\n'
           << "positivity: " << positivity << '\n'
           << "chrono_in_causal: " << chronoInCausal << '\n'
           << "push_up: " << pushUp << '\n'
           << "reflexivity: " << reflexivity << '\n'
           << "transitivity: " << transitivity << '\n'
           << "violations: " << violations() << '\n';
        auto witness = [&](const char* key, const std::string& w) {
            if (!w.empty()) os << key << "_witness: " << w << '\n';
        };
        witness("reverse_triangle", reverseTriangleWitness);
        witness("positivity", positivityWitness);
        witness("chrono_in_causal", chronoInCausalWitness);
        witness("push_up", pushUpWitness);
        witness("reflexivity", reflexivityWitness);
        witness("transitivity", transitivityWitness);
        return os.str();
    }
};

namespace detail {

inline void record(std::uint64_t& counter, std::string& witness, const std::string& what) {
    if (counter++ == 0) witness = what;
}

/// Checks every axiom on one triple; `describe` renders the witness lazily.
/// Transitivity and push-up are boundary statements, so they are tested
/// against `zLate`, z moved at most `tol` into its own future (z itself for
/// discrete models).
template <class M, class E, class Describe>
void auditTriple(const M& m, const E& x, const E& y, const E& z, double tol, AuditReport& r,
                 Describe&& describe, const E& zLate) {
    ++r.triplesChecked;
    const E* pts[3] = {&x, &y, &z};
    for (const E* a : pts) {
        if (!m.causal(*a, *a)) detail::record(r.reflexivity, r.reflexivityWitness, describe());
    }
    const std::pair<const E*, const E*> pairs[6] = {{&x, &y}, {&y, &z}, {&x, &z},
                                                    {&y, &x}, {&z, &y}, {&z, &x}};
    for (const auto& [a, b] : pairs) {
        ++r.pairsChecked;
        const bool ch = m.chrono(*a, *b);
        if ((m.tau(*a, *b) > 0) != ch) detail::record(r.positivity, r.positivityWitness, describe());
        if (ch && !m.causal(*a, *b)) {
            detail::record(r.chronoInCausal, r.chronoInCausalWitness, describe());
        }
    }
    const bool xy = m.causal(x, y);
    const bool yz = m.causal(y, z);
    if (xy && yz) {
        if (!m.causal(x, zLate)) detail::record(r.transitivity, r.transitivityWitness, describe());
        if (m.tau(x, z) < m.tau(x, y) + m.tau(y, z) - tol) {
            detail::record(r.reverseTriangle, r.reverseTriangleWitness, describe());
        }
    }
    if ((xy && m.chrono(y, z)) || (m.chrono(x, y) && yz)) {
        if (!m.chrono(x, zLate)) detail::record(r.pushUp, r.pushUpWitness, describe());
    }
}

/// Random displacement: mostly future timelike, with null, zero, spacelike
/// and past-directed cases mixed in so that every axiom sees boundary input.
inline Point randomStep(Rng& rng, double scale) {
    const double dt = rng.uniform(0.0, scale);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    switch (rng.below(10)) {
        case 0:
            return {0.0, 0.0};
        case 1:
        case 2:
            return {dt, sign * dt};
        case 9:
            return {dt, sign * dt * (1.0 + rng.uniform())};
        case 8:
            return {-dt, sign * dt * rng.uniform()};
        default:
            return {dt, sign * dt * rng.uniform()};
    }
}

}  // namespace detail

/// Samples `samples` triples (x, y, z), mostly along causal chains, and
/// counts axiom violations at absolute tolerance `tol`.
template <FlatModel M>
AuditReport auditAxioms(const M& m, std::uint64_t samples, std::uint64_t seed, std::string name,
                        double tol = kTauTol) {
    if (samples == 0) throw DomainError("auditAxioms: samples must be positive");
    AuditReport r;
    r.model = std::move(name);
    Rng rng(seed);
    const double scale = m.extent();
    for (std::uint64_t s = 0; s < samples; ++s) {
        const Point x = m.sample(rng);
        Point y;
        if (rng.below(4) == 0) {
            y = m.sample(rng);
        } else {
            const Point st = detail::randomStep(rng, scale);
            y = m.normalize({x.t + st.t, x.x + st.x});
        }
        const Point st = detail::randomStep(rng, scale);
        const Point z = m.normalize({y.t + st.t, y.x + st.x});
        const double nudge = tol * std::max({1.0, std::abs(z.t), std::abs(z.x)});
        detail::auditTriple(
            m, x, y, z, tol, r,
            [&] { return "x=" + formatPoint(x) + " y=" + formatPoint(y) + " z=" + formatPoint(z); },
            m.normalize({z.t + nudge, z.x}));
    }
    return r;
}

}  // namespace lorcal
