#pragma once

// Poisson sprinkling of a continuum region into a causal DAG.

#include <algorithm>
#include <vector>

#include "lorcal/causal_dag.hpp"
#include "lorcal/cylinder.hpp"
#include "lorcal/minkowski.hpp"
#include "lorcal/rng.hpp"

namespace lorcal {

/// Edges are the full causal relation between distinct points, weighted
/// with the ambient tau.
template <FlatModel M>
CausalDag causalDagFromPoints(const M& region, const std::vector<Point>& pts) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i == j || !region.causal(pts[i], pts[j])) continue;
            // coincident points are related both ways; keep one direction
            if (j < i && region.causal(pts[j], pts[i])) continue;
            edges.push_back({i, j, region.tau(pts[i], pts[j])});
        }
    }
    return CausalDag(pts.size(), std::move(edges), pts);
}

/// Nested sprinklings for ascending densities. Layer k adds
/// Poisson((rho_k - rho_{k-1}) * area) uniform points drawn from the
/// stream seed ^ (k + 1), so every result contains the previous one's
/// points with the same node ids. `anchors` are always nodes 0..a-1.
template <FlatModel M>
std::vector<CausalDag> sprinkleNested(const M& region, const std::vector<double>& densities,
                                      std::uint64_t seed, const std::vector<Point>& anchors = {}) {
    if (densities.empty()) throw DomainError("sprinkle: no densities given");
    for (std::size_t k = 0; k < densities.size(); ++k) {
        if (!(densities[k] > 0)) throw DomainError("sprinkle: density must be positive");
        if (k > 0 && !(densities[k] >= densities[k - 1])) {
            throw DomainError("sprinkle: nested densities must be nondecreasing");
        }
    }
    if (!(region.area() > 0)) throw DomainError("sprinkle: empty region");
    std::vector<Point> pts;
    for (const Point& a : anchors) {
        requireFinite(a, "sprinkle anchor");
        pts.push_back(region.normalize(a));
    }
    std::vector<CausalDag> out;
    double previous = 0.0;
    for (std::size_t k = 0; k < densities.size(); ++k) {
        Rng rng = Rng::stream(seed, k + 1);
        const std::uint64_t count = rng.poisson((densities[k] - previous) * region.area());
        for (std::uint64_t c = 0; c < count; ++c) pts.push_back(region.sample(rng));
        previous = densities[k];
        out.push_back(causalDagFromPoints(region, pts));
    }
    return out;
}

template <FlatModel M>
CausalDag sprinkle(const M& region, double density, std::uint64_t seed,
                   const std::vector<Point>& anchors = {}) {
    return std::move(sprinkleNested(region, {density}, seed, anchors).front());
}

}  // namespace lorcal
