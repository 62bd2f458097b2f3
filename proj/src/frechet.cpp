#include "frechet_pd/frechet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>

#include "frechet_pd/errors.hpp"
#include "frechet_pd/geometry.hpp"
#include "frechet_pd/parallel.hpp"
#include "frechet_pd/rng.hpp"

namespace fpd {

namespace {

std::vector<double> unit_weights(std::size_t m) { return std::vector<double>(m, 1.0); }

void check_weights(const std::vector<PersistenceDiagram>& diagrams,
                   const std::vector<double>& weights) {
    if (diagrams.empty()) throw argument_error("at least one diagram is required");
    if (diagrams.size() != weights.size())
        throw argument_error("weights must match the number of diagrams");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw argument_error("weights must be positive");
}

}  // namespace

double frechet_function_weighted(const PersistenceDiagram& y,
                                 const std::vector<PersistenceDiagram>& diagrams,
                                 const std::vector<double>& weights) {
    check_weights(diagrams, weights);
    CompensatedSum total;
    double total_weight = 0.0;
    for (std::size_t i = 0; i < diagrams.size(); ++i) {
        total.add(weights[i] * squared_distance(y, diagrams[i], Ground::euclidean));
        total_weight += weights[i];
    }
    return total.value() / total_weight;
}

double frechet_function(const PersistenceDiagram& y,
                        const std::vector<PersistenceDiagram>& diagrams) {
    return frechet_function_weighted(y, diagrams, unit_weights(diagrams.size()));
}

std::optional<DiagramPoint> mean_of_matched_weighted(
    std::span<const std::optional<DiagramPoint>> points, std::span<const double> weights) {
    if (points.empty()) throw argument_error("mean of an empty match group is undefined");
    if (points.size() != weights.size())
        throw argument_error("weights must match the number of matched points");
    double total_weight = 0.0;
    double off_diag_weight = 0.0;
    double birth_sum = 0.0;
    double death_sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        total_weight += weights[i];
        if (!points[i]) continue;
        off_diag_weight += weights[i];
        birth_sum += weights[i] * points[i]->birth;
        death_sum += weights[i] * points[i]->death;
    }
    if (off_diag_weight == 0.0) return std::nullopt;
    const DiagramPoint w{birth_sum / off_diag_weight, death_sum / off_diag_weight};
    const PlanarPoint w_delta = diagonal_projection(w);
    const double diag_weight = total_weight - off_diag_weight;
    const DiagramPoint result{
        (off_diag_weight * w.birth + diag_weight * w_delta.x) / total_weight,
        (off_diag_weight * w.death + diag_weight * w_delta.y) / total_weight};
    if (!(result.death > result.birth)) return std::nullopt;
    return result;
}

std::optional<DiagramPoint> mean_of_matched(
    std::span<const std::optional<DiagramPoint>> points) {
    const std::vector<double> weights(points.size(), 1.0);
    return mean_of_matched_weighted(points, weights);
}

namespace {

// One geometric match (coordinates, diagonal flagged) for structural
// pairing comparison across iterations.
using MatchKey = std::array<double, 6>;
using PairingKey = std::vector<MatchKey>;

PairingKey pairing_key(const Pairing& pairing, const PersistenceDiagram& a,
                       const PersistenceDiagram& b) {
    PairingKey key;
    key.reserve(pairing.matches.size());
    for (const Match& m : pairing.matches) {
        MatchKey k{};
        if (m.source == kDiagonal) {
            k[0] = 1.0;
        } else {
            k[1] = a[static_cast<std::size_t>(m.source)].birth;
            k[2] = a[static_cast<std::size_t>(m.source)].death;
        }
        if (m.target == kDiagonal) {
            k[3] = 1.0;
        } else {
            k[4] = b[static_cast<std::size_t>(m.target)].birth;
            k[5] = b[static_cast<std::size_t>(m.target)].death;
        }
        key.push_back(k);
    }
    std::sort(key.begin(), key.end());
    return key;
}

std::vector<Pairing> solve_all(const PersistenceDiagram& y,
                               const std::vector<PersistenceDiagram>& diagrams) {
    std::vector<Pairing> pairings;
    pairings.reserve(diagrams.size());
    for (const PersistenceDiagram& x : diagrams)
        pairings.push_back(optimal_pairing(y, x, Ground::euclidean));
    return pairings;
}

double weighted_value(const std::vector<Pairing>& pairings, const std::vector<double>& weights,
                      double total_weight) {
    CompensatedSum total;
    for (std::size_t i = 0; i < pairings.size(); ++i) total.add(weights[i] * pairings[i].cost);
    return total.value() / total_weight;
}

// Step (c) of the descent: each matched group becomes its arithmetic mean;
// every (diagonal, x) match spawns a new point averaged against the
// remaining weight's worth of diagonal copies.
PersistenceDiagram update_mean(const PersistenceDiagram& y,
                               const std::vector<PersistenceDiagram>& diagrams,
                               const std::vector<double>& weights,
                               const std::vector<Pairing>& pairings) {
    const std::size_t m = diagrams.size();
    std::vector<std::vector<int>> target_of(m, std::vector<int>(y.size(), kDiagonal));
    for (std::size_t i = 0; i < m; ++i)
        for (const Match& match : pairings[i].matches)
            if (match.source != kDiagonal)
                target_of[i][static_cast<std::size_t>(match.source)] = match.target;

    std::vector<DiagramPoint> next;
    std::vector<std::optional<DiagramPoint>> group(m);
    for (std::size_t j = 0; j < y.size(); ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            const int target = target_of[i][j];
            group[i] = target == kDiagonal
                           ? std::nullopt
                           : std::optional<DiagramPoint>(
                                 diagrams[i][static_cast<std::size_t>(target)]);
        }
        if (const auto mean = mean_of_matched_weighted(group, weights)) next.push_back(*mean);
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (const Match& match : pairings[i].matches) {
            if (match.source != kDiagonal) continue;
            std::fill(group.begin(), group.end(), std::nullopt);
            group[i] = diagrams[i][static_cast<std::size_t>(match.target)];
            if (const auto spawned = mean_of_matched_weighted(group, weights))
                next.push_back(*spawned);
        }
    }
    return PersistenceDiagram(std::move(next));
}

PersistenceDiagram initial_diagram(const std::vector<PersistenceDiagram>& diagrams,
                                   const MeanInit& init) {
    switch (init.mode) {
        case InitMode::given:
            return init.initial;
        case InitMode::random_input: {
            CounterRng rng(substream_key(init.seed, 0x1717));
            return diagrams[rng.bounded(diagrams.size())];
        }
        case InitMode::midpoint: {
            CounterRng rng(substream_key(init.seed, 0x3434));
            const std::size_t a = rng.bounded(diagrams.size());
            std::size_t b = rng.bounded(diagrams.size());
            if (diagrams.size() > 1 && b == a) b = (b + 1) % diagrams.size();
            return evaluate_geodesic(Geodesic(diagrams[a], diagrams[b]), 0.5);
        }
    }
    throw argument_error("unknown initialization mode");
}

Certificate make_certificate(const PersistenceDiagram& mean,
                             const std::vector<PersistenceDiagram>& diagrams,
                             const std::vector<double>& weights, double tol) {
    Certificate certificate;
    certificate.supporting_vector_norm =
        supporting_vector_weighted(mean, diagrams, weights).norm();
    certificate.pairings_unique = TriState::yes;
    for (const PersistenceDiagram& x : diagrams) {
        if (mean.size() + x.size() > 12) {
            if (certificate.pairings_unique == TriState::yes)
                certificate.pairings_unique = TriState::unknown;
            continue;
        }
        if (count_optimal_pairings(mean, x, Ground::euclidean, tol) != 1) {
            certificate.pairings_unique = TriState::no;
            break;
        }
    }
    return certificate;
}

}  // namespace

FrechetResult compute_mean_weighted(const std::vector<PersistenceDiagram>& diagrams,
                                    const std::vector<double>& weights,
                                    const MeanOptions& options) {
    check_weights(diagrams, weights);
    if (options.max_iter < 1) throw argument_error("max_iter must be at least 1");
    double total_weight = 0.0;
    for (double w : weights) total_weight += w;

    FrechetResult result;
    PersistenceDiagram y = initial_diagram(diagrams, options.init);
    std::vector<Pairing> pairings = solve_all(y, diagrams);
    auto keys_of = [&](const PersistenceDiagram& base, const std::vector<Pairing>& ps) {
        std::vector<PairingKey> keys;
        keys.reserve(ps.size());
        for (std::size_t i = 0; i < ps.size(); ++i)
            keys.push_back(pairing_key(ps[i], base, diagrams[i]));
        return keys;
    };
    std::vector<PairingKey> keys = keys_of(y, pairings);

    for (int iter = 1; iter <= options.max_iter; ++iter) {
        result.iterations = iter;
        result.trace.push_back(weighted_value(pairings, weights, total_weight));
        PersistenceDiagram updated = update_mean(y, diagrams, weights, pairings);
        std::vector<Pairing> next_pairings = solve_all(updated, diagrams);
        std::vector<PairingKey> next_keys = keys_of(updated, next_pairings);
        const bool unchanged = next_keys == keys;
        y = std::move(updated);
        pairings = std::move(next_pairings);
        keys = std::move(next_keys);
        if (unchanged) {
            result.converged = true;
            break;
        }
    }

    result.mean = std::move(y);
    result.frechet_value = weighted_value(pairings, weights, total_weight);
    result.pairings = std::move(pairings);
    if (options.compute_certificate && result.converged) {
        result.certificate =
            make_certificate(result.mean, diagrams, weights, options.certificate_tol);
    } else {
        result.certificate.supporting_vector_norm =
            supporting_vector_weighted(result.mean, diagrams, weights).norm();
        result.certificate.pairings_unique = TriState::unknown;
    }
    return result;
}

FrechetResult compute_mean(const std::vector<PersistenceDiagram>& diagrams,
                           const MeanOptions& options) {
    return compute_mean_weighted(diagrams, unit_weights(diagrams.size()), options);
}

MultiRestartResult multi_restart_mean(const std::vector<PersistenceDiagram>& diagrams,
                                      int restarts, std::uint64_t seed, int max_iter,
                                      int jobs) {
    if (diagrams.empty()) throw argument_error("at least one diagram is required");
    if (restarts < 1) throw argument_error("restarts must be at least 1");

    std::vector<FrechetResult> runs(static_cast<std::size_t>(restarts));
    parallel_for(jobs, runs.size(), [&](std::size_t r) {
        CounterRng rng(substream_key(seed, 0xA0 + r));
        MeanOptions options;
        options.max_iter = max_iter;
        const bool use_midpoint = diagrams.size() > 1 && rng.bernoulli(0.5);
        options.init = use_midpoint ? MeanInit::midpoint(rng.next_u64())
                                    : MeanInit::random_input(rng.next_u64());
        runs[r] = compute_mean(diagrams, options);
    });

    MultiRestartResult result;
    bool have_best = false;
    for (FrechetResult& run : runs) {
        if (run.converged) {
            ++result.restarts_converged;
            bool duplicate = false;
            for (const PersistenceDiagram& known : result.minima) {
                if (distance(run.mean, known, Ground::euclidean) < kMinimaDedupDistance) {
                    duplicate = true;
                    break;
                }
            }
            if (!duplicate) {
                result.minima.push_back(run.mean);
                result.minima_values.push_back(run.frechet_value);
            }
        }
        const bool better =
            !have_best || (run.converged && !result.best.converged) ||
            (run.converged == result.best.converged &&
             run.frechet_value < result.best.frechet_value);
        if (better) {
            result.best = std::move(run);
            have_best = true;
        }
    }
    return result;
}

namespace {

// Recursively enumerates every partition of the diagrams' points into
// groups holding at most one point from each diagram.
struct PartitionEnumerator {
    const std::vector<PersistenceDiagram>& diagrams;
    // groups[g][i] = point index in diagram i, or kDiagonal.
    std::vector<std::vector<int>> groups;
    std::vector<double> unit;

    struct Best {
        double value = std::numeric_limits<double>::infinity();
        PersistenceDiagram mean;
        bool valid = false;
    } best;

    std::vector<PersistenceDiagram> local_minima;

    explicit PartitionEnumerator(const std::vector<PersistenceDiagram>& ds)
        : diagrams(ds), unit(ds.size(), 1.0) {}

    void run() { recurse_diagram(0); }

    void recurse_diagram(std::size_t d) {
        if (d == diagrams.size()) {
            evaluate();
            return;
        }
        recurse_point(d, 0, groups.size());
    }

    // Points of diagram d join distinct groups created for earlier diagrams
    // (index < open_limit) or start new groups.
    void recurse_point(std::size_t d, std::size_t p, std::size_t open_limit) {
        if (p == diagrams[d].size()) {
            recurse_diagram(d + 1);
            return;
        }
        for (std::size_t g = 0; g < open_limit; ++g) {
            if (groups[g][d] != kDiagonal) continue;
            groups[g][d] = static_cast<int>(p);
            recurse_point(d, p + 1, open_limit);
            groups[g][d] = kDiagonal;
        }
        groups.emplace_back(diagrams.size(), kDiagonal);
        groups.back()[d] = static_cast<int>(p);
        recurse_point(d, p + 1, open_limit);
        groups.pop_back();
    }

    void evaluate() {
        const std::size_t m = diagrams.size();
        std::vector<DiagramPoint> points;
        points.reserve(groups.size());
        std::vector<std::optional<DiagramPoint>> elements(m);
        for (const std::vector<int>& group : groups) {
            for (std::size_t i = 0; i < m; ++i) {
                elements[i] = group[i] == kDiagonal
                                  ? std::nullopt
                                  : std::optional<DiagramPoint>(
                                        diagrams[i][static_cast<std::size_t>(group[i])]);
            }
            if (const auto mean = mean_of_matched(elements)) points.push_back(*mean);
        }
        PersistenceDiagram candidate(std::move(points));
        const double value = frechet_function(candidate, diagrams);
        if (value < best.value || !best.valid) {
            best.value = value;
            best.mean = candidate;
            best.valid = true;
        }
        if (passes_certificate(candidate)) {
            for (const PersistenceDiagram& known : local_minima)
                if (distance(candidate, known, Ground::euclidean) < kMinimaDedupDistance)
                    return;
            local_minima.push_back(std::move(candidate));
        }
    }

    bool passes_certificate(const PersistenceDiagram& candidate) const {
        constexpr double kTol = 1e-9;
        std::vector<std::vector<std::optional<DiagramPoint>>> matched(
            candidate.size(),
            std::vector<std::optional<DiagramPoint>>(diagrams.size(), std::nullopt));
        for (std::size_t i = 0; i < diagrams.size(); ++i) {
            const Pairing pairing = optimal_pairing(candidate, diagrams[i], Ground::euclidean);
            for (const Match& match : pairing.matches) {
                // A local minimum never pairs an off-diagonal input point
                // with the diagonal of the candidate.
                if (match.source == kDiagonal) return false;
                if (match.target != kDiagonal)
                    matched[static_cast<std::size_t>(match.source)][i] =
                        diagrams[i][static_cast<std::size_t>(match.target)];
            }
        }
        for (std::size_t j = 0; j < candidate.size(); ++j) {
            const auto mean = mean_of_matched(matched[j]);
            if (!mean) return false;
            if (std::abs(mean->birth - candidate[j].birth) > kTol ||
                std::abs(mean->death - candidate[j].death) > kTol)
                return false;
        }
        for (const PersistenceDiagram& x : diagrams) {
            if (candidate.size() + x.size() > 12) continue;  // uniqueness not checkable
            if (count_optimal_pairings(candidate, x, Ground::euclidean, kTol) != 1)
                return false;
        }
        return true;
    }
};

}  // namespace

OracleResult oracle_global_mean(const std::vector<PersistenceDiagram>& diagrams) {
    if (diagrams.empty()) throw argument_error("at least one diagram is required");
    std::uint64_t guard = 1;
    for (const PersistenceDiagram& x : diagrams) {
        guard *= static_cast<std::uint64_t>(x.size()) + 1;
        if (guard > kOracleGuard)
            throw capacity_error(
                "oracle instance exceeds the configuration guard prod(k_i + 1) <= " +
                std::to_string(kOracleGuard));
    }
    PartitionEnumerator enumerator(diagrams);
    enumerator.run();
    OracleResult result;
    result.mean = std::move(enumerator.best.mean);
    result.frechet_value = enumerator.best.value;
    result.num_local_minima = enumerator.local_minima.size();
    return result;
}

}  // namespace fpd
