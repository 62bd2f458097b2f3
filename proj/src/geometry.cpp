#include "frechet_pd/geometry.hpp"

#include <cmath>

#include "frechet_pd/errors.hpp"

namespace fpd {

Geodesic::Geodesic(PersistenceDiagram start, PersistenceDiagram end)
    : start_(std::move(start)), end_(std::move(end)) {
    pairing_ = optimal_pairing(start_, end_, Ground::euclidean);
    length_ = std::sqrt(pairing_.cost);
}

Geodesic::Geodesic(PersistenceDiagram start, PersistenceDiagram end, Pairing pairing,
                   double tol)
    : start_(std::move(start)), end_(std::move(end)), pairing_(std::move(pairing)) {
    std::vector<int> source_seen(start_.size(), 0), target_seen(end_.size(), 0);
    for (const Match& m : pairing_.matches) {
        if (m.source == kDiagonal && m.target == kDiagonal)
            throw argument_error("pairing stores a diagonal-to-diagonal match");
        if (m.source != kDiagonal) ++source_seen[static_cast<std::size_t>(m.source)];
        if (m.target != kDiagonal) ++target_seen[static_cast<std::size_t>(m.target)];
    }
    for (int seen : source_seen)
        if (seen != 1) throw argument_error("pairing must cover every start point once");
    for (int seen : target_seen)
        if (seen != 1) throw argument_error("pairing must cover every end point once");
    const double optimal = squared_distance(start_, end_, Ground::euclidean);
    const double actual = pairing_cost(pairing_, start_, end_, Ground::euclidean);
    if (actual > optimal + tol)
        throw argument_error("geodesic pairing is not optimal: cost " +
                             std::to_string(actual) + " exceeds minimum " +
                             std::to_string(optimal));
    pairing_.cost = actual;
    length_ = std::sqrt(actual);
}

PersistenceDiagram evaluate_geodesic(const Geodesic& geodesic, double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw argument_error("geodesic parameter t must lie in [0, 1]");
    const PersistenceDiagram& a = geodesic.start();
    const PersistenceDiagram& b = geodesic.end();
    std::vector<DiagramPoint> points;
    points.reserve(geodesic.pairing().matches.size());
    for (const Match& m : geodesic.pairing().matches) {
        DiagramPoint from, to;
        if (m.source != kDiagonal && m.target != kDiagonal) {
            from = a[static_cast<std::size_t>(m.source)];
            to = b[static_cast<std::size_t>(m.target)];
        } else if (m.source != kDiagonal) {
            from = a[static_cast<std::size_t>(m.source)];
            const PlanarPoint proj = diagonal_projection(from);
            to = {proj.x, proj.y};
        } else {
            to = b[static_cast<std::size_t>(m.target)];
            const PlanarPoint proj = diagonal_projection(to);
            from = {proj.x, proj.y};
        }
        const DiagramPoint interpolated{(1.0 - t) * from.birth + t * to.birth,
                                        (1.0 - t) * from.death + t * to.death};
        if (interpolated.death > interpolated.birth) points.push_back(interpolated);
    }
    return PersistenceDiagram(std::move(points));
}

AlexandrovCheck check_alexandrov(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                 const PersistenceDiagram& z, double t, double slack) {
    if (!(t >= 0.0 && t <= 1.0))
        throw argument_error("geodesic parameter t must lie in [0, 1]");
    const Geodesic geodesic(x, y);
    const PersistenceDiagram mid = evaluate_geodesic(geodesic, t);
    AlexandrovCheck check;
    check.lhs = squared_distance(z, mid, Ground::euclidean);
    const double dzy = squared_distance(z, y, Ground::euclidean);
    const double dzx = squared_distance(z, x, Ground::euclidean);
    const double dxy = geodesic.length() * geodesic.length();
    check.rhs = t * dzy + (1.0 - t) * dzx - t * (1.0 - t) * dxy;
    check.holds = check.lhs >= check.rhs - slack;
    return check;
}

double TangentVector::squared_norm() const {
    CompensatedSum total;
    for (const auto& v : vectors) total.add(v[0] * v[0] + v[1] * v[1]);
    return total.value();
}

double TangentVector::norm() const { return std::sqrt(squared_norm()); }

TangentVector supporting_vector_weighted(const PersistenceDiagram& y,
                                         const std::vector<PersistenceDiagram>& diagrams,
                                         const std::vector<double>& weights) {
    if (diagrams.empty()) throw argument_error("supporting vector needs at least one diagram");
    if (diagrams.size() != weights.size())
        throw argument_error("weights must match the number of diagrams");
    double total_weight = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw argument_error("weights must be positive");
        total_weight += w;
    }
    TangentVector tangent;
    tangent.base = y;
    tangent.vectors.assign(y.size(), {0.0, 0.0});
    for (std::size_t i = 0; i < diagrams.size(); ++i) {
        const Pairing pairing = optimal_pairing(y, diagrams[i], Ground::euclidean);
        for (const Match& m : pairing.matches) {
            if (m.source == kDiagonal) continue;
            const std::size_t j = static_cast<std::size_t>(m.source);
            const DiagramPoint& base = y[j];
            double tx, ty;
            if (m.target == kDiagonal) {
                const PlanarPoint proj = diagonal_projection(base);
                tx = proj.x;
                ty = proj.y;
            } else {
                const DiagramPoint& target = diagrams[i][static_cast<std::size_t>(m.target)];
                tx = target.birth;
                ty = target.death;
            }
            tangent.vectors[j][0] += weights[i] * (tx - base.birth);
            tangent.vectors[j][1] += weights[i] * (ty - base.death);
        }
    }
    const double scale = 2.0 / total_weight;
    for (auto& v : tangent.vectors) {
        v[0] *= scale;
        v[1] *= scale;
    }
    return tangent;
}

TangentVector supporting_vector(const PersistenceDiagram& y,
                                const std::vector<PersistenceDiagram>& diagrams) {
    return supporting_vector_weighted(y, diagrams, std::vector<double>(diagrams.size(), 1.0));
}

bool semiconcavity_probe(const PersistenceDiagram& x, const Geodesic& geodesic, double s1,
                         double s2, double t, double slack) {
    const double length = geodesic.length();
    if (!(s1 >= 0.0 && s2 >= 0.0 && s1 <= length + 1e-12 && s2 <= length + 1e-12))
        throw argument_error("arc-length parameters must lie in [0, length]");
    if (!(t >= 0.0 && t <= 1.0))
        throw argument_error("interpolation parameter t must lie in [0, 1]");
    auto g = [&](double s) {
        const double fraction = length > 0.0 ? std::min(s / length, 1.0) : 0.0;
        const PersistenceDiagram at = evaluate_geodesic(geodesic, fraction);
        return squared_distance(at, x, Ground::euclidean) - s * s;
    };
    const double mid = t * s1 + (1.0 - t) * s2;
    return g(mid) >= t * g(s1) + (1.0 - t) * g(s2) - slack;
}

}  // namespace fpd
