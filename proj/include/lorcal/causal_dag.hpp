#pragma once

#include <cmath>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "lorcal/core.hpp"
#include "lorcal/format.hpp"
#include "lorcal/rng.hpp"
#include "lorcal/tau_engine.hpp"

namespace lorcal {

/// A finite causal DAG as a Lorentzian pre-length space: <= is the
/// reflexive-transitive closure of the edges, tau is the max-plus longest
/// path weight, << means a path of positive weight exists.
class CausalDag {
public:
    using event_type = NodeId;

    /// Above this node count tau and reachability are answered per query
    /// instead of from a dense table.
    static constexpr std::size_t kDenseLimit = 10000;

    CausalDag() = default;

    CausalDag(std::size_t n, std::vector<Edge> edges,
              std::optional<std::vector<Point>> coords = std::nullopt)
        : graph_(n, std::move(edges)), coords_(std::move(coords)) {
        if (coords_ && coords_->size() != n) {
            throw DomainError("CausalDag: coordinate count does not match node count");
        }
        if (n <= kDenseLimit) {
            auto all = longestPathAllPairs(graph_);
            table_ = std::move(all.tau);
            reach_ = std::move(all.reach);
            dense_ = true;
        }
        minPositiveWeight_ = kInfinity;
        for (const Edge& e : graph_.edges())
            if (e.weight > 0) minPositiveWeight_ = std::min(minPositiveWeight_, e.weight);
        buildUndirected();
    }

    /// Model whose relations come straight from a precomputed table. With no
    /// reachability given, i <= j iff i == j or tau(i,j) > 0. Used to audit
    /// externally supplied or deliberately corrupted tables.
    static CausalDag fromTable(TauTable table, std::optional<Reachability> reach = std::nullopt) {
        const std::size_t n = table.size();
        std::vector<Edge> edges;
        Reachability r(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && table.at(i, j) > 0) {
                    edges.push_back({i, j, table.at(i, j)});
                    r.set(i, j);
                }
        CausalDag dag;
        dag.graph_ = Digraph(n, std::move(edges));
        dag.table_ = std::move(table);
        dag.reach_ = reach ? std::move(*reach) : std::move(r);
        dag.dense_ = true;
        dag.minPositiveWeight_ = kInfinity;
        for (const Edge& e : dag.graph_.edges()) dag.minPositiveWeight_ = std::min(dag.minPositiveWeight_, e.weight);
        dag.buildUndirected();
        return dag;
    }

    std::size_t size() const noexcept { return graph_.size(); }
    const Digraph& graph() const noexcept { return graph_; }
    const std::optional<std::vector<Point>>& coords() const noexcept { return coords_; }
    bool dense() const noexcept { return dense_; }

    /// Dense table; only available when dense().
    const TauTable& table() const {
        if (!dense_) throw DomainError("CausalDag: no dense table above the dense limit");
        return table_;
    }
    const Reachability& reachability() const {
        if (!dense_) throw DomainError("CausalDag: no dense table above the dense limit");
        return reach_;
    }

    /// Euclidean embedding distance when coordinates exist, otherwise the
    /// undirected hop count (+inf between components).
    double d(NodeId a, NodeId b) const {
        check(a);
        check(b);
        if (coords_) {
            const Point& p = (*coords_)[a.id];
            const Point& q = (*coords_)[b.id];
            return std::hypot(q.t - p.t, q.x - p.x);
        }
        return hopDistance(a.id, b.id);
    }

    bool causal(NodeId a, NodeId b) const {
        check(a);
        check(b);
        if (dense_) return reach_.at(a.id, b.id);
        return longestFrom(graph_, a.id).reaches(b.id);
    }
    bool chrono(NodeId a, NodeId b) const { return tau(a, b) > 0; }

    double tau(NodeId a, NodeId b) const {
        check(a);
        check(b);
        if (dense_) return table_.at(a.id, b.id);
        const SourcePass pass = longestFrom(graph_, a.id);
        return pass.reaches(b.id) ? pass.best[b.id] : 0.0;
    }

    /// No chronological pair has tau below the smallest positive edge
    /// weight, so every diamond lower than that is vacuously a comparison
    /// neighborhood.
    double comparisonRadius() const noexcept { return minPositiveWeight_; }

    CausalDag timeReversed() const {
        std::optional<std::vector<Point>> rc;
        if (coords_) {
            rc = *coords_;
            for (Point& p : *rc) p.t = -p.t;
        }
        return CausalDag(size(), graph_.reversed().edges(), std::move(rc));
    }
    NodeId reflect(NodeId a) const { return a; }

private:
    void check(NodeId a) const {
        if (a.id >= size()) throw DomainError("node id " + std::to_string(a.id) + " out of range");
    }

    void buildUndirected() {
        adj_.assign(size(), {});
        for (const Edge& e : graph_.edges()) {
            adj_[e.from].push_back(e.to);
            adj_[e.to].push_back(e.from);
        }
    }

    double hopDistance(std::size_t a, std::size_t b) const {
        if (a == b) return 0.0;
        std::vector<std::size_t> dist(size(), SourcePass::kNone);
        std::deque<std::size_t> queue{a};
        dist[a] = 0;
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t v : adj_[u]) {
                if (dist[v] != SourcePass::kNone) continue;
                dist[v] = dist[u] + 1;
                if (v == b) return static_cast<double>(dist[v]);
                queue.push_back(v);
            }
        }
        return kInfinity;
    }

    Digraph graph_;
    std::optional<std::vector<Point>> coords_;
    TauTable table_;
    Reachability reach_;
    bool dense_{false};
    double minPositiveWeight_{kInfinity};
    std::vector<std::vector<std::size_t>> adj_;
};

inline CausalDag buildCausalDag(std::size_t n, std::vector<Edge> edges,
                                std::optional<std::vector<Point>> coords = std::nullopt) {
    return CausalDag(n, std::move(edges), std::move(coords));
}

inline TauTable longestPathTau(const CausalDag& g) {
    return g.dense() ? g.table() : longestPathTau(g.graph());
}

/// Audits a DAG. Up to `exhaustiveLimit` nodes every triple with
/// x <= y <= z is checked (plus all pairs); above it, `samples` random
/// triples are drawn. `tol` = 0 demands the exact reverse triangle
/// inequality.
inline AuditReport auditAxioms(const CausalDag& g, std::uint64_t samples, std::uint64_t seed,
                               std::string name, double tol = kTauTol,
                               std::size_t exhaustiveLimit = 200) {
    if (samples == 0) throw DomainError("auditAxioms: samples must be positive");
    AuditReport r;
    r.model = std::move(name);
    const std::size_t n = g.size();
    auto nodeTriple = [](std::size_t x, std::size_t y, std::size_t z) {
        return "x=" + std::to_string(x) + " y=" + std::to_string(y) + " z=" + std::to_string(z);
    };
    if (n == 0) return r;
    if (n <= exhaustiveLimit && g.dense()) {
        const TauTable& t = g.table();
        const Reachability& re = g.reachability();
        for (std::size_t i = 0; i < n; ++i) {
            if (!re.at(i, i)) detail::record(r.reflexivity, r.reflexivityWitness, nodeTriple(i, i, i));
            for (std::size_t j = 0; j < n; ++j) {
                ++r.pairsChecked;
                const bool ch = g.chrono({i}, {j});
                if ((t.at(i, j) > 0) != ch) {
                    detail::record(r.positivity, r.positivityWitness, nodeTriple(i, j, j));
                }
                if (ch && !re.at(i, j)) {
                    detail::record(r.chronoInCausal, r.chronoInCausalWitness, nodeTriple(i, j, j));
                }
            }
        }
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t x = 0; x < n; ++x) {
                if (!re.at(x, y)) continue;
                for (std::size_t z = 0; z < n; ++z) {
                    if (!re.at(y, z)) continue;
                    ++r.triplesChecked;
                    if (!re.at(x, z)) {
                        detail::record(r.transitivity, r.transitivityWitness, nodeTriple(x, y, z));
                    }
                    if (t.at(x, z) < t.at(x, y) + t.at(y, z) - tol) {
                        detail::record(r.reverseTriangle, r.reverseTriangleWitness, nodeTriple(x, y, z));
                    }
                    const bool xyc = t.at(x, y) > 0;
                    const bool yzc = t.at(y, z) > 0;
                    if ((xyc || yzc) && !(t.at(x, z) > 0)) {
                        detail::record(r.pushUp, r.pushUpWitness, nodeTriple(x, y, z));
                    }
                }
            }
        }
        return r;
    }
    Rng rng(seed);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const NodeId x{rng.below(n)}, y{rng.below(n)}, z{rng.below(n)};
        detail::auditTriple(g, x, y, z, tol, r, [&] { return nodeTriple(x.id, y.id, z.id); }, z);
    }
    return r;
}

}  // namespace lorcal
