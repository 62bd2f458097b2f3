#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "frechet_pd/assignment.hpp"
#include "frechet_pd/diagram.hpp"

namespace fpd {

/// Mean of squared distances from y to the given diagrams.
double frechet_function(const PersistenceDiagram& y,
                        const std::vector<PersistenceDiagram>& diagrams);

double frechet_function_weighted(const PersistenceDiagram& y,
                                 const std::vector<PersistenceDiagram>& diagrams,
                                 const std::vector<double>& weights);

/// Arithmetic mean of m points-or-diagonals: with k off-diagonal points of
/// plain mean w and diagonal projection w_delta, the result is
/// (k w + (m-k) w_delta) / m. All-diagonal input (or a degenerate result)
/// yields nullopt, i.e. the diagonal.
std::optional<DiagramPoint> mean_of_matched(std::span<const std::optional<DiagramPoint>> points);

std::optional<DiagramPoint> mean_of_matched_weighted(
    std::span<const std::optional<DiagramPoint>> points, std::span<const double> weights);

enum class InitMode { random_input, given, midpoint };

struct MeanInit {
    InitMode mode = InitMode::random_input;
    std::uint64_t seed = 0;
    PersistenceDiagram initial;

    static MeanInit random_input(std::uint64_t seed) { return {InitMode::random_input, seed, {}}; }
    static MeanInit given(PersistenceDiagram y0) { return {InitMode::given, 0, std::move(y0)}; }
    static MeanInit midpoint(std::uint64_t seed) { return {InitMode::midpoint, seed, {}}; }
};

struct MeanOptions {
    MeanInit init;
    int max_iter = 200;
    /// Absolute tolerance for the certificate's pairing-uniqueness count.
    double certificate_tol = 1e-9;
    bool compute_certificate = true;
};

enum class TriState { no, yes, unknown };

/// Local-minimum certificate: zero supporting vector is necessary, and
/// together with unique optimal pairings sufficient. Uniqueness is checked
/// by enumeration only when the instance is small enough.
struct Certificate {
    double supporting_vector_norm = 0.0;
    TriState pairings_unique = TriState::unknown;
};

struct FrechetResult {
    PersistenceDiagram mean;
    double frechet_value = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;       // F value per iteration
    std::vector<Pairing> pairings;   // final pairings, one per input diagram
    Certificate certificate;
};

/// Hungarian-pairing gradient descent: solve optimal pairings, replace each
/// matched group by its arithmetic mean (matches from the diagonal spawn new
/// points against m-1 diagonal copies), stop once the re-solved pairings are
/// unchanged. Exhausting max_iter flags the result as non-converged.
FrechetResult compute_mean(const std::vector<PersistenceDiagram>& diagrams,
                           const MeanOptions& options);

/// Same descent on the weighted measure sum_i w_i delta_{X_i} / sum_i w_i;
/// equivalent to replicating integer-weight diagrams.
FrechetResult compute_mean_weighted(const std::vector<PersistenceDiagram>& diagrams,
                                    const std::vector<double>& weights,
                                    const MeanOptions& options);

struct MultiRestartResult {
    FrechetResult best;
    std::vector<PersistenceDiagram> minima;  // distinct converged local minima
    std::vector<double> minima_values;
    int restarts_converged = 0;
};

/// Runs compute_mean from `restarts` random starts (input diagrams and
/// midpoints of random pairs), deduplicating local minima at distance 1e-7.
MultiRestartResult multi_restart_mean(const std::vector<PersistenceDiagram>& diagrams,
                                      int restarts, std::uint64_t seed, int max_iter = 200,
                                      int jobs = 1);

struct OracleResult {
    PersistenceDiagram mean;
    double frechet_value = 0.0;
    std::uint64_t num_local_minima = 0;
};

/// Brute-force search over all point groupings (one point-or-diagonal from
/// each diagram per group): evaluates F at every induced candidate diagram
/// and returns the global minimizer plus the number of distinct candidates
/// passing the local-minimum certificate. Guarded by prod(k_i + 1) <= 1e5.
OracleResult oracle_global_mean(const std::vector<PersistenceDiagram>& diagrams);

/// Capacity guard used by oracle_global_mean.
inline constexpr std::uint64_t kOracleGuard = 100000;

/// Distance below which two local minima are considered the same diagram.
inline constexpr double kMinimaDedupDistance = 1e-7;

}  // namespace fpd
