// Independent reference implementations used only by tests. These must not
// share code paths with the library: the assignment oracle enumerates
// permutations, the distance oracle is a bitmask dynamic program over
// bijections, and homology ranks come from dense GF(2) elimination.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "frechet_pd/diagram.hpp"
#include "frechet_pd/rng.hpp"

namespace oracles {

/// Exhaustive minimum assignment cost over all n! permutations.
inline double min_assignment_by_permutations(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += cost[i][perm[i]];
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Exhaustive-bijection minimum of sum |x - phi(x)|^2 between two diagrams,
/// computed by dynamic programming over used-target bitmasks. Every point of
/// a is matched to an unused point of b or to the diagonal; leftover points
/// of b pair with the diagonal. Costs are recomputed here from raw
/// coordinates so the oracle shares no arithmetic with the library.
inline double squared_wasserstein(const fpd::PersistenceDiagram& a,
                                  const fpd::PersistenceDiagram& b, fpd::Ground ground) {
    const bool euclidean = ground == fpd::Ground::euclidean;
    const auto pair_cost = [&](const fpd::DiagramPoint& p, const fpd::DiagramPoint& q) {
        const double db = p.birth - q.birth;
        const double dd = p.death - q.death;
        if (euclidean) return db * db + dd * dd;
        const double c = std::max(std::abs(db), std::abs(dd));
        return c * c;
    };
    const auto diag_cost = [&](const fpd::DiagramPoint& p) {
        const double pers = p.death - p.birth;
        return euclidean ? pers * pers / 2.0 : pers * pers / 4.0;
    };
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<double> b_diag(m);
    for (std::size_t j = 0; j < m; ++j) b_diag[j] = diag_cost(b[j]);
    const std::size_t num_masks = std::size_t{1} << m;
    std::vector<double> layer(num_masks, std::numeric_limits<double>::infinity());
    layer[0] = 0.0;
    std::vector<double> next(num_masks);
    for (std::size_t i = 0; i < n; ++i) {
        const double diag = diag_cost(a[i]);
        std::fill(next.begin(), next.end(), std::numeric_limits<double>::infinity());
        for (std::size_t mask = 0; mask < num_masks; ++mask) {
            if (layer[mask] == std::numeric_limits<double>::infinity()) continue;
            next[mask] = std::min(next[mask], layer[mask] + diag);
            for (std::size_t j = 0; j < m; ++j) {
                if (mask & (std::size_t{1} << j)) continue;
                const std::size_t with = mask | (std::size_t{1} << j);
                next[with] = std::min(next[with], layer[mask] + pair_cost(a[i], b[j]));
            }
        }
        layer.swap(next);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t mask = 0; mask < num_masks; ++mask) {
        if (layer[mask] == std::numeric_limits<double>::infinity()) continue;
        double leftover = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            if (!(mask & (std::size_t{1} << j))) leftover += b_diag[j];
        best = std::min(best, layer[mask] + leftover);
    }
    return best;
}

/// Rank of a GF(2) matrix given as row bitsets.
inline std::size_t gf2_rank(std::vector<std::vector<std::uint64_t>> rows, std::size_t cols) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
        const std::size_t word = col / 64;
        const std::uint64_t bit = std::uint64_t{1} << (col % 64);
        std::size_t pivot = rank;
        while (pivot < rows.size() && !(rows[pivot][word] & bit)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && (rows[r][word] & bit))
                for (std::size_t w = 0; w < rows[r].size(); ++w) rows[r][w] ^= rows[rank][w];
        }
        ++rank;
    }
    return rank;
}

/// Random diagram with up to max_points points, coordinates in [lo, hi).
inline fpd::PersistenceDiagram random_diagram(fpd::CounterRng& rng, std::size_t max_points,
                                              double lo = 0.0, double hi = 10.0) {
    const std::size_t count = rng.bounded(max_points + 1);
    std::vector<fpd::DiagramPoint> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double birth = rng.uniform(lo, hi);
        double death = birth;
        while (!(death > birth)) death = birth + rng.uniform(0.0, hi - birth);
        points.push_back({birth, death});
    }
    return fpd::PersistenceDiagram(std::move(points));
}

inline fpd::PersistenceDiagram nonempty_random_diagram(fpd::CounterRng& rng,
                                                       std::size_t max_points, double lo = 0.0,
                                                       double hi = 10.0) {
    for (;;) {
        fpd::PersistenceDiagram d = random_diagram(rng, max_points, lo, hi);
        if (!d.empty()) return d;
    }
}

}  // namespace oracles
