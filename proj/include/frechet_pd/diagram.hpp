#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fpd {

/// Ground norm on the birth-death plane used by matching costs.
enum class Ground { euclidean, chebyshev };

struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

/// A birth-death pair strictly above the diagonal, both coordinates finite.
struct DiagramPoint {
    double birth = 0.0;
    double death = 0.0;

    double persistence() const { return death - birth; }

    friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
    friend auto operator<=>(const DiagramPoint&, const DiagramPoint&) = default;
};

/// Nearest diagonal point under either ground norm: the coordinate midpoint.
PlanarPoint diagonal_projection(const DiagramPoint& p);

/// Distance from p to the diagonal: (d-b)/sqrt(2) euclidean, (d-b)/2 chebyshev.
double diagonal_distance(const DiagramPoint& p, Ground norm);

double ground_distance(const DiagramPoint& a, const DiagramPoint& b, Ground norm);

/// Squared costs computed without an intermediate root, so integer-coordinate
/// inputs produce exactly representable matching costs.
double squared_diagonal_distance(const DiagramPoint& p, Ground norm);

double squared_ground_distance(const DiagramPoint& a, const DiagramPoint& b, Ground norm);

/// Finite multiset of off-diagonal points kept in canonical (birth, death)
/// lexicographic order; multiplicity is represented by repetition.
///
/// Points with death <= birth or non-finite coordinates are rejected at
/// construction. Values are immutable after construction.
class PersistenceDiagram {
public:
    PersistenceDiagram() = default;
    explicit PersistenceDiagram(std::vector<DiagramPoint> points);

    std::span<const DiagramPoint> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const DiagramPoint& operator[](std::size_t i) const { return points_[i]; }

    /// Total squared euclidean distance of all points to the diagonal.
    double squared_diagonal_mass() const;

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

private:
    std::vector<DiagramPoint> points_;
};

/// Points with persistence >= alpha (the alpha-upper part). Requires alpha > 0.
PersistenceDiagram upper_filter(const PersistenceDiagram& diagram, double alpha);

/// Points with persistence < alpha (the alpha-lower part). Requires alpha > 0.
/// upper_filter and lower_filter partition the diagram for every alpha.
PersistenceDiagram lower_filter(const PersistenceDiagram& diagram, double alpha);

/// Drops points with persistence < eps. Opt-in utility; construction itself
/// never discards data.
PersistenceDiagram prune(const PersistenceDiagram& diagram, double eps);

}  // namespace fpd
