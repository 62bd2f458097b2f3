#pragma once

#include <array>
#include <vector>

#include "frechet_pd/assignment.hpp"
#include "frechet_pd/diagram.hpp"

namespace fpd {

/// Straight-line geodesic induced by an optimal euclidean pairing. The
/// pairing is solved once at construction; evaluation never re-solves.
class Geodesic {
public:
    Geodesic(PersistenceDiagram start, PersistenceDiagram end);

    /// Uses a caller-supplied pairing (must be optimal within tol; the square
    /// witness needs geodesics for each member of a cost tie).
    Geodesic(PersistenceDiagram start, PersistenceDiagram end, Pairing pairing,
             double tol = 1e-9);

    const PersistenceDiagram& start() const { return start_; }
    const PersistenceDiagram& end() const { return end_; }
    const Pairing& pairing() const { return pairing_; }

    /// d(start, end); the geodesic is parametrized over [0, length] by arc length.
    double length() const { return length_; }

private:
    PersistenceDiagram start_;
    PersistenceDiagram end_;
    Pairing pairing_;
    double length_ = 0.0;
};

/// Diagram {(1-t)x + t phi(x)} for t in [0,1]. A diagonal endpoint of a match
/// is replaced by the other point's diagonal projection; interpolants landing
/// exactly on the diagonal are pruned.
PersistenceDiagram evaluate_geodesic(const Geodesic& geodesic, double t);

struct AlexandrovCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Non-negative-curvature comparison along the euclidean geodesic from x to y:
/// d(z, gamma(t))^2 >= t d(z,y)^2 + (1-t) d(z,x)^2 - t(1-t) d(x,y)^2.
AlexandrovCheck check_alexandrov(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                 const PersistenceDiagram& z, double t, double slack = 1e-9);

/// Extrinsic tangent vector at a base diagram: one 2-vector per base point.
struct TangentVector {
    PersistenceDiagram base;
    std::vector<std::array<double, 2>> vectors;

    double squared_norm() const;
    double norm() const;
};

/// Supporting vector of the Frechet function at y for the uniform measure on
/// `diagrams`: v_j = (2/m) sum_i (phi_i(y_j) - y_j), where a diagonal target
/// contributes the projection of y_j. Zero norm is necessary at a local
/// minimum.
TangentVector supporting_vector(const PersistenceDiagram& y,
                                const std::vector<PersistenceDiagram>& diagrams);

/// Weighted variant: v_j = (2/W) sum_i w_i (phi_i(y_j) - y_j).
TangentVector supporting_vector_weighted(const PersistenceDiagram& y,
                                         const std::vector<PersistenceDiagram>& diagrams,
                                         const std::vector<double>& weights);

/// Concavity probe for g_X(s) = d(gamma(s), X)^2 - s^2 with the geodesic
/// parametrized by arc length over [0, length]: checks
/// g_X(t s1 + (1-t) s2) >= t g_X(s1) + (1-t) g_X(s2) - slack.
bool semiconcavity_probe(const PersistenceDiagram& x, const Geodesic& geodesic, double s1,
                         double s2, double t, double slack = 1e-9);

}  // namespace fpd
