#include "frechet_pd/assignment.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <set>

#include "frechet_pd/errors.hpp"

namespace fpd {

std::size_t Pairing::num_point_matches() const {
    std::size_t count = 0;
    for (const Match& m : matches)
        if (m.source != kDiagonal && m.target != kDiagonal) ++count;
    return count;
}

std::size_t Pairing::num_diagonal_matches() const {
    return matches.size() - num_point_matches();
}

AssignmentProblem build_assignment_problem(const PersistenceDiagram& a,
                                           const PersistenceDiagram& b, Ground ground) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    AssignmentProblem problem;
    problem.n = n + m;
    problem.cost.assign(problem.n * problem.n, 0.0);
    std::vector<double> a_diag(n), b_diag(m);
    for (std::size_t i = 0; i < n; ++i) a_diag[i] = squared_diagonal_distance(a[i], ground);
    for (std::size_t j = 0; j < m; ++j) b_diag[j] = squared_diagonal_distance(b[j], ground);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            problem.cost[i * problem.n + j] = squared_ground_distance(a[i], b[j], ground);
        for (std::size_t j = m; j < problem.n; ++j)
            problem.cost[i * problem.n + j] = a_diag[i];
    }
    for (std::size_t i = n; i < problem.n; ++i)
        for (std::size_t j = 0; j < m; ++j) problem.cost[i * problem.n + j] = b_diag[j];
    return problem;
}

AssignmentSolution solve_assignment(const AssignmentProblem& problem) {
    const std::size_t n = problem.n;
    if (problem.cost.size() != n * n)
        throw argument_error("assignment matrix must be square");
    for (double c : problem.cost) {
        if (!std::isfinite(c)) throw argument_error("assignment costs must be finite");
        if (c < 0.0) throw argument_error("assignment costs must be non-negative");
    }
    AssignmentSolution solution;
    solution.row_to_col.assign(n, 0);
    if (n == 0) return solution;

    constexpr double kInf = std::numeric_limits<double>::infinity();
    // Jonker-Volgenant shortest augmenting paths with 1-based bookkeeping.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> col_to_row(n + 1, 0), way(n + 1, 0);
    std::vector<double> min_cost(n + 1);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        col_to_row[0] = i;
        std::size_t j0 = 0;
        std::fill(min_cost.begin(), min_cost.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = col_to_row[j0];
            std::size_t j1 = 0;
            double delta = kInf;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = problem.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < min_cost[j]) {
                    min_cost[j] = cur;
                    way[j] = j0;
                }
                if (min_cost[j] < delta) {
                    delta = min_cost[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[col_to_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_cost[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_to_row[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            col_to_row[j0] = col_to_row[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    for (std::size_t j = 1; j <= n; ++j)
        if (col_to_row[j] != 0) solution.row_to_col[col_to_row[j] - 1] = j - 1;
    CompensatedSum total;
    for (std::size_t i = 0; i < n; ++i) total.add(problem.at(i, solution.row_to_col[i]));
    solution.cost = total.value();
    return solution;
}

namespace {

double match_cost(const Match& m, const PersistenceDiagram& a, const PersistenceDiagram& b,
                  Ground ground) {
    if (m.source != kDiagonal && m.target != kDiagonal)
        return squared_ground_distance(a[static_cast<std::size_t>(m.source)],
                                       b[static_cast<std::size_t>(m.target)], ground);
    const DiagramPoint& p = m.source != kDiagonal ? a[static_cast<std::size_t>(m.source)]
                                                  : b[static_cast<std::size_t>(m.target)];
    return squared_diagonal_distance(p, ground);
}

}  // namespace

double pairing_cost(const Pairing& pairing, const PersistenceDiagram& a,
                    const PersistenceDiagram& b, Ground ground) {
    CompensatedSum total;
    for (const Match& m : pairing.matches) total.add(match_cost(m, a, b, ground));
    return total.value();
}

Pairing optimal_pairing(const PersistenceDiagram& a, const PersistenceDiagram& b,
                        Ground ground) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    Pairing pairing;
    if (n + m == 0) return pairing;
    const AssignmentSolution solution = solve_assignment(build_assignment_problem(a, b, ground));
    for (std::size_t i = 0; i < n + m; ++i) {
        const std::size_t j = solution.row_to_col[i];
        if (i < n) {
            pairing.matches.push_back(
                {static_cast<int>(i), j < m ? static_cast<int>(j) : kDiagonal});
        } else if (j < m) {
            pairing.matches.push_back({kDiagonal, static_cast<int>(j)});
        }
    }
    pairing.cost = pairing_cost(pairing, a, b, ground);
    return pairing;
}

double squared_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                        Ground ground) {
    return optimal_pairing(a, b, ground).cost;
}

double distance(const PersistenceDiagram& a, const PersistenceDiagram& b, Ground ground) {
    return std::sqrt(squared_distance(a, b, ground));
}

namespace {

// One geometric match as comparable data: flag 1 marks a diagonal side.
using MatchKey = std::array<double, 6>;
using PairingKey = std::vector<MatchKey>;

MatchKey key_for(const Match& m, const PersistenceDiagram& a, const PersistenceDiagram& b) {
    MatchKey key{};
    if (m.source == kDiagonal) {
        key[0] = 1.0;
    } else {
        const DiagramPoint& p = a[static_cast<std::size_t>(m.source)];
        key[1] = p.birth;
        key[2] = p.death;
    }
    if (m.target == kDiagonal) {
        key[3] = 1.0;
    } else {
        const DiagramPoint& p = b[static_cast<std::size_t>(m.target)];
        key[4] = p.birth;
        key[5] = p.death;
    }
    return key;
}

PairingKey key_for(const Pairing& pairing, const PersistenceDiagram& a,
                   const PersistenceDiagram& b) {
    PairingKey key;
    key.reserve(pairing.matches.size());
    for (const Match& m : pairing.matches) key.push_back(key_for(m, a, b));
    std::sort(key.begin(), key.end());
    return key;
}

// Visits every bijection as an injective partial map from a's points into
// b's points; unmatched points on either side pair with the diagonal.
template <typename Visit>
void for_each_bijection(const PersistenceDiagram& a, const PersistenceDiagram& b,
                        Visit&& visit) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<int> target_of(n, kDiagonal);
    std::vector<char> used(m, 0);
    auto recurse = [&](auto&& self, std::size_t i) -> void {
        if (i == n) {
            visit(target_of);
            return;
        }
        target_of[i] = kDiagonal;
        self(self, i + 1);
        for (std::size_t j = 0; j < m; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            target_of[i] = static_cast<int>(j);
            self(self, i + 1);
            target_of[i] = kDiagonal;
            used[j] = 0;
        }
    };
    recurse(recurse, 0);
}

Pairing pairing_from_targets(const std::vector<int>& target_of, std::size_t m) {
    Pairing pairing;
    std::vector<char> covered(m, 0);
    for (std::size_t i = 0; i < target_of.size(); ++i) {
        pairing.matches.push_back({static_cast<int>(i), target_of[i]});
        if (target_of[i] != kDiagonal) covered[static_cast<std::size_t>(target_of[i])] = 1;
    }
    for (std::size_t j = 0; j < m; ++j)
        if (!covered[j]) pairing.matches.push_back({kDiagonal, static_cast<int>(j)});
    return pairing;
}

}  // namespace

std::vector<Pairing> enumerate_optimal_pairings(const PersistenceDiagram& a,
                                                const PersistenceDiagram& b, Ground ground,
                                                double tol) {
    constexpr std::size_t kMaxCombined = 12;
    if (a.size() + b.size() > kMaxCombined)
        throw capacity_error("optimal-pairing enumeration is limited to " +
                             std::to_string(kMaxCombined) + " combined off-diagonal points");
    if (tol < 0.0) throw argument_error("tolerance must be non-negative");

    const std::size_t m = b.size();
    std::vector<double> a_diag(a.size()), b_diag(m);
    for (std::size_t i = 0; i < a.size(); ++i) a_diag[i] = squared_diagonal_distance(a[i], ground);
    double b_diag_total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        b_diag[j] = squared_diagonal_distance(b[j], ground);
        b_diag_total += b_diag[j];
    }
    auto cost_of = [&](const std::vector<int>& target_of) {
        double cost = b_diag_total;
        for (std::size_t i = 0; i < target_of.size(); ++i) {
            if (target_of[i] == kDiagonal) {
                cost += a_diag[i];
            } else {
                const std::size_t j = static_cast<std::size_t>(target_of[i]);
                cost += squared_ground_distance(a[i], b[j], ground) - b_diag[j];
            }
        }
        return cost;
    };

    double best = std::numeric_limits<double>::infinity();
    for_each_bijection(a, b, [&](const std::vector<int>& target_of) {
        best = std::min(best, cost_of(target_of));
    });

    std::vector<Pairing> result;
    std::set<PairingKey> seen;
    for_each_bijection(a, b, [&](const std::vector<int>& target_of) {
        if (cost_of(target_of) > best + tol) return;
        Pairing pairing = pairing_from_targets(target_of, m);
        if (!seen.insert(key_for(pairing, a, b)).second) return;
        pairing.cost = pairing_cost(pairing, a, b, ground);
        result.push_back(std::move(pairing));
    });
    return result;
}

std::uint64_t count_optimal_pairings(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                     Ground ground, double tol) {
    return enumerate_optimal_pairings(a, b, ground, tol).size();
}

}  // namespace fpd
