#include "frechet_pd/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frechet_pd/errors.hpp"

namespace fpd {

namespace {

const double kSqrt2 = std::sqrt(2.0);

std::string describe(const DiagramPoint& p) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << p.birth << ", " << p.death << ")";
    return os.str();
}

}  // namespace

PlanarPoint diagonal_projection(const DiagramPoint& p) {
    const double mid = 0.5 * (p.birth + p.death);
    return {mid, mid};
}

double diagonal_distance(const DiagramPoint& p, Ground norm) {
    const double pers = p.death - p.birth;
    return norm == Ground::euclidean ? pers / kSqrt2 : pers / 2.0;
}

double ground_distance(const DiagramPoint& a, const DiagramPoint& b, Ground norm) {
    const double db = a.birth - b.birth;
    const double dd = a.death - b.death;
    if (norm == Ground::euclidean) return std::hypot(db, dd);
    return std::max(std::abs(db), std::abs(dd));
}

double squared_diagonal_distance(const DiagramPoint& p, Ground norm) {
    const double pers = p.death - p.birth;
    return norm == Ground::euclidean ? pers * pers / 2.0 : pers * pers / 4.0;
}

double squared_ground_distance(const DiagramPoint& a, const DiagramPoint& b, Ground norm) {
    const double db = a.birth - b.birth;
    const double dd = a.death - b.death;
    if (norm == Ground::euclidean) return db * db + dd * dd;
    const double c = std::max(std::abs(db), std::abs(dd));
    return c * c;
}

PersistenceDiagram::PersistenceDiagram(std::vector<DiagramPoint> points)
    : points_(std::move(points)) {
    for (const DiagramPoint& p : points_) {
        if (!std::isfinite(p.birth) || !std::isfinite(p.death))
            throw argument_error("coordinates must be finite for point " + describe(p));
        if (!(p.death > p.birth))
            throw argument_error("death must exceed birth for point " + describe(p));
    }
    std::sort(points_.begin(), points_.end());
}

double PersistenceDiagram::squared_diagonal_mass() const {
    double total = 0.0;
    for (const DiagramPoint& p : points_)
        total += squared_diagonal_distance(p, Ground::euclidean);
    return total;
}

namespace {

PersistenceDiagram filtered(const PersistenceDiagram& diagram, double alpha, bool keep_upper) {
    if (!(alpha > 0.0)) throw argument_error("filter threshold alpha must be positive");
    std::vector<DiagramPoint> kept;
    for (const DiagramPoint& p : diagram.points())
        if ((p.persistence() >= alpha) == keep_upper) kept.push_back(p);
    return PersistenceDiagram(std::move(kept));
}

}  // namespace

PersistenceDiagram upper_filter(const PersistenceDiagram& diagram, double alpha) {
    return filtered(diagram, alpha, true);
}

PersistenceDiagram lower_filter(const PersistenceDiagram& diagram, double alpha) {
    return filtered(diagram, alpha, false);
}

PersistenceDiagram prune(const PersistenceDiagram& diagram, double eps) {
    std::vector<DiagramPoint> kept;
    for (const DiagramPoint& p : diagram.points())
        if (p.persistence() >= eps) kept.push_back(p);
    return PersistenceDiagram(std::move(kept));
}

}  // namespace fpd
