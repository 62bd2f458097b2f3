#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "frechet_pd/diagram.hpp"

namespace fpd {

/// Index of the diagonal pseudo-point in a Match.
inline constexpr int kDiagonal = -1;

/// One matched pair of an optimal bijection; either side may be the diagonal
/// (kDiagonal), never both.
struct Match {
    int source = kDiagonal;
    int target = kDiagonal;

    friend bool operator==(const Match&, const Match&) = default;
    friend auto operator<=>(const Match&, const Match&) = default;
};

/// A bijection between two diagrams' points plus diagonal copies. Every
/// off-diagonal point of both diagrams appears in exactly one match and
/// (diagonal, diagonal) matches are never stored. cost is the compensated
/// sum of squared ground distances over the matches.
struct Pairing {
    std::vector<Match> matches;
    double cost = 0.0;

    std::size_t num_point_matches() const;
    std::size_t num_diagonal_matches() const;
};

/// Square cost matrix in row-major order.
struct AssignmentProblem {
    std::size_t n = 0;
    std::vector<double> cost;

    double at(std::size_t row, std::size_t col) const { return cost[row * n + col]; }
};

/// Builds the diagonal-augmented (n+m)^2 problem: the point block holds
/// squared ground distances, every point-to-diagonal entry the squared
/// diagonal distance, and the diagonal block zeros.
AssignmentProblem build_assignment_problem(const PersistenceDiagram& a,
                                           const PersistenceDiagram& b, Ground ground);

struct AssignmentSolution {
    std::vector<std::size_t> row_to_col;
    double cost = 0.0;
};

/// Minimum-cost perfect matching (Jonker-Volgenant shortest augmenting
/// paths). Deterministic under ties: the scan keeps the first minimal column.
/// Throws argument_error for non-square, negative or non-finite input.
AssignmentSolution solve_assignment(const AssignmentProblem& problem);

/// Globally optimal pairing between two diagrams under the chosen ground
/// norm; cost is recomputed from the matches with compensated summation.
Pairing optimal_pairing(const PersistenceDiagram& a, const PersistenceDiagram& b,
                        Ground ground);

double squared_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                        Ground ground);

/// L2-Wasserstein distance (euclidean ground) or the Chebyshev-ground
/// 2-Wasserstein distance: sqrt of the optimal pairing cost.
double distance(const PersistenceDiagram& a, const PersistenceDiagram& b, Ground ground);

/// Cost of a given pairing evaluated against the two diagrams.
double pairing_cost(const Pairing& pairing, const PersistenceDiagram& a,
                    const PersistenceDiagram& b, Ground ground);

/// All optimal pairings within tol of the minimum cost, found by exhaustive
/// enumeration and deduplicated geometrically (points at distance zero are
/// interchangeable). Capacity-guarded at 12 combined off-diagonal points.
std::vector<Pairing> enumerate_optimal_pairings(const PersistenceDiagram& a,
                                                const PersistenceDiagram& b, Ground ground,
                                                double tol);

std::uint64_t count_optimal_pairings(const PersistenceDiagram& a,
                                     const PersistenceDiagram& b, Ground ground, double tol);

/// Neumaier compensated accumulator for sums of squared costs.
class CompensatedSum {
public:
    void add(double value) {
        const double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value))
            compensation_ += (sum_ - t) + value;
        else
            compensation_ += (value - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace fpd
