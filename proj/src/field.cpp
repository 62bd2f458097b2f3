#include "frechet_pd/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "frechet_pd/errors.hpp"
#include "frechet_pd/frechet.hpp"
#include "frechet_pd/parallel.hpp"
#include "frechet_pd/rng.hpp"

namespace fpd {

ScalarField::ScalarField(int grid_size, std::vector<double> values)
    : grid_size_(grid_size), values_(std::move(values)) {
    if (grid_size < 2) throw argument_error("grid_size must be at least 2");
    if (values_.size() != static_cast<std::size_t>(grid_size) * grid_size)
        throw argument_error("field needs grid_size^2 values");
    for (double v : values_)
        if (!std::isfinite(v)) throw argument_error("field values must be finite");
}

ScalarField ScalarField::negated() const {
    std::vector<double> flipped(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) flipped[i] = -values_[i];
    return ScalarField(grid_size_, std::move(flipped));
}

double squared_exponential_covariance(double alpha, double dx, double dy) {
    return std::exp(-alpha * (dx * dx + dy * dy));
}

FieldModel::FieldModel(const FieldConfig& config) : config_(config) {
    if (config.grid_size < 2) throw argument_error("grid_size must be at least 2");
    if (!(config.alpha > 0.0)) throw argument_error("alpha must be positive");
    if (config.jitter < 0.0) throw argument_error("jitter must be non-negative");
    const std::size_t g = static_cast<std::size_t>(config.grid_size);
    num_vertices_ = g * g;
    if (num_vertices_ > 10000)
        throw capacity_error("dense covariance factorization guard: grid_size^2 <= 10000");

    const double spacing = 1.0 / static_cast<double>(g - 1);
    std::vector<double> k(num_vertices_ * num_vertices_);
    for (std::size_t a = 0; a < num_vertices_; ++a) {
        const double ax = static_cast<double>(a / g) * spacing;
        const double ay = static_cast<double>(a % g) * spacing;
        for (std::size_t b = 0; b <= a; ++b) {
            const double bx = static_cast<double>(b / g) * spacing;
            const double by = static_cast<double>(b % g) * spacing;
            double cov = squared_exponential_covariance(config.alpha, ax - bx, ay - by);
            if (a == b) cov += config.jitter;
            k[a * num_vertices_ + b] = cov;
        }
    }

    // In-place lower Cholesky; non-positive pivots (rounding on a PSD
    // matrix) zero out their column.
    cholesky_ = std::move(k);
    auto l = [&](std::size_t r, std::size_t c) -> double& {
        return cholesky_[r * num_vertices_ + c];
    };
    for (std::size_t j = 0; j < num_vertices_; ++j) {
        double pivot = l(j, j);
        for (std::size_t p = 0; p < j; ++p) pivot -= l(j, p) * l(j, p);
        if (pivot > 0.0) {
            const double root = std::sqrt(pivot);
            l(j, j) = root;
            for (std::size_t i = j + 1; i < num_vertices_; ++i) {
                double value = l(i, j);
                for (std::size_t p = 0; p < j; ++p) value -= l(i, p) * l(j, p);
                l(i, j) = value / root;
            }
        } else {
            l(j, j) = 0.0;
            for (std::size_t i = j + 1; i < num_vertices_; ++i) l(i, j) = 0.0;
        }
    }
}

ScalarField FieldModel::generate(std::uint64_t field_index) const {
    CounterRng rng(substream_key(config_.seed, 0xF1E1D000000000ULL + field_index));
    std::vector<double> normals(num_vertices_);
    rng.fill_normals(normals);
    std::vector<double> values(num_vertices_, 0.0);
    for (std::size_t i = 0; i < num_vertices_; ++i) {
        double sum = 0.0;
        const double* row = &cholesky_[i * num_vertices_];
        for (std::size_t j = 0; j <= i; ++j) sum += row[j] * normals[j];
        values[i] = sum;
    }
    return ScalarField(config_.grid_size, std::move(values));
}

ScalarField generate_field(const FieldConfig& config) {
    return FieldModel(config).generate(0);
}

namespace {

// Cubical complex on the grid: vertices, then horizontal edges, vertical
// edges, and squares. Cell values are vertex maxima (lower-star).
struct CubicalComplex {
    int g = 0;
    std::size_t num_vertices = 0, num_hedges = 0, num_vedges = 0, num_squares = 0;
    std::vector<double> value;  // by cell id
    std::vector<int> dim;       // by cell id
    std::vector<std::size_t> order;     // filtration order -> cell id
    std::vector<std::size_t> position;  // cell id -> filtration order

    explicit CubicalComplex(const ScalarField& field) {
        g = field.grid_size();
        const std::size_t gs = static_cast<std::size_t>(g);
        num_vertices = gs * gs;
        num_hedges = gs * (gs - 1);
        num_vedges = (gs - 1) * gs;
        num_squares = (gs - 1) * (gs - 1);
        const std::size_t total = num_vertices + num_hedges + num_vedges + num_squares;
        value.resize(total);
        dim.resize(total);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) {
                value[vertex(i, j)] = field.at(i, j);
                dim[vertex(i, j)] = 0;
            }
        for (int i = 0; i < g; ++i)
            for (int j = 0; j + 1 < g; ++j) {
                value[hedge(i, j)] = std::max(field.at(i, j), field.at(i, j + 1));
                dim[hedge(i, j)] = 1;
            }
        for (int i = 0; i + 1 < g; ++i)
            for (int j = 0; j < g; ++j) {
                value[vedge(i, j)] = std::max(field.at(i, j), field.at(i + 1, j));
                dim[vedge(i, j)] = 1;
            }
        for (int i = 0; i + 1 < g; ++i)
            for (int j = 0; j + 1 < g; ++j) {
                value[square(i, j)] =
                    std::max(std::max(field.at(i, j), field.at(i, j + 1)),
                             std::max(field.at(i + 1, j), field.at(i + 1, j + 1)));
                dim[square(i, j)] = 2;
            }
        order.resize(total);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (value[a] != value[b]) return value[a] < value[b];
            if (dim[a] != dim[b]) return dim[a] < dim[b];
            return a < b;
        });
        position.resize(total);
        for (std::size_t p = 0; p < total; ++p) position[order[p]] = p;
    }

    std::size_t vertex(int i, int j) const {
        return static_cast<std::size_t>(i) * g + static_cast<std::size_t>(j);
    }
    std::size_t hedge(int i, int j) const {
        return num_vertices + static_cast<std::size_t>(i) * (g - 1) + j;
    }
    std::size_t vedge(int i, int j) const {
        return num_vertices + num_hedges + static_cast<std::size_t>(i) * g + j;
    }
    std::size_t square(int i, int j) const {
        return num_vertices + num_hedges + num_vedges + static_cast<std::size_t>(i) * (g - 1) +
               j;
    }

    std::vector<std::size_t> boundary(std::size_t id) const {
        std::vector<std::size_t> faces;
        if (id < num_vertices) return faces;
        if (id < num_vertices + num_hedges) {
            const std::size_t e = id - num_vertices;
            const int i = static_cast<int>(e / (g - 1));
            const int j = static_cast<int>(e % (g - 1));
            faces = {position[vertex(i, j)], position[vertex(i, j + 1)]};
        } else if (id < num_vertices + num_hedges + num_vedges) {
            const std::size_t e = id - num_vertices - num_hedges;
            const int i = static_cast<int>(e / g);
            const int j = static_cast<int>(e % g);
            faces = {position[vertex(i, j)], position[vertex(i + 1, j)]};
        } else {
            const std::size_t q = id - num_vertices - num_hedges - num_vedges;
            const int i = static_cast<int>(q / (g - 1));
            const int j = static_cast<int>(q % (g - 1));
            faces = {position[hedge(i, j)], position[hedge(i + 1, j)], position[vedge(i, j)],
                     position[vedge(i, j + 1)]};
        }
        std::sort(faces.begin(), faces.end());
        return faces;
    }
};

PersistenceDiagram pairs_to_diagram(const std::vector<DiagramPoint>& raw) {
    std::vector<DiagramPoint> kept;
    for (const DiagramPoint& p : raw)
        if (p.death > p.birth) kept.push_back(p);
    return PersistenceDiagram(std::move(kept));
}

PersistenceDiagram h0_by_union_find(const CubicalComplex& complex) {
    std::vector<std::size_t> parent(complex.num_vertices);
    std::iota(parent.begin(), parent.end(), 0);
    // Component age for the elder rule: (birth value, filtration position).
    std::vector<double> birth(complex.num_vertices, 0.0);
    std::vector<std::size_t> birth_pos(complex.num_vertices, 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    std::vector<DiagramPoint> pairs;
    for (std::size_t p = 0; p < complex.order.size(); ++p) {
        const std::size_t id = complex.order[p];
        if (complex.dim[id] == 0) {
            birth[id] = complex.value[id];
            birth_pos[id] = p;
            continue;
        }
        if (complex.dim[id] != 1) continue;
        const std::vector<std::size_t> faces = complex.boundary(id);
        std::size_t ra = find(complex.order[faces[0]]);
        std::size_t rb = find(complex.order[faces[1]]);
        if (ra == rb) continue;
        // The younger component dies at the edge value.
        const bool a_elder = birth[ra] != birth[rb] ? birth[ra] < birth[rb]
                                                    : birth_pos[ra] < birth_pos[rb];
        const std::size_t elder = a_elder ? ra : rb;
        const std::size_t younger = a_elder ? rb : ra;
        pairs.push_back({birth[younger], complex.value[id]});
        parent[younger] = elder;
    }
    return pairs_to_diagram(pairs);
}

std::vector<DiagramPoint> reduce_boundary_matrix(const CubicalComplex& complex,
                                                 int dimension) {
    const std::size_t total = complex.order.size();
    std::vector<std::vector<std::size_t>> columns(total);
    std::vector<std::size_t> low_owner(total, total);  // total = unowned
    std::vector<DiagramPoint> pairs;
    std::vector<std::size_t> merged;
    for (std::size_t c = 0; c < total; ++c) {
        std::vector<std::size_t> column = complex.boundary(complex.order[c]);
        while (!column.empty() && low_owner[column.back()] != total) {
            const std::vector<std::size_t>& other = columns[low_owner[column.back()]];
            merged.clear();
            std::set_symmetric_difference(column.begin(), column.end(), other.begin(),
                                          other.end(), std::back_inserter(merged));
            column.swap(merged);
        }
        if (!column.empty()) {
            const std::size_t b = column.back();
            low_owner[b] = c;
            if (complex.dim[complex.order[b]] == dimension)
                pairs.push_back(
                    {complex.value[complex.order[b]], complex.value[complex.order[c]]});
        }
        columns[c] = std::move(column);
    }
    return pairs;
}

void check_dimension(int dimension) {
    if (dimension != 0 && dimension != 1)
        throw argument_error("persistence dimension must be 0 or 1");
}

}  // namespace

PersistenceDiagram sublevel_persistence(const ScalarField& field, int dimension) {
    check_dimension(dimension);
    const CubicalComplex complex(field);
    if (dimension == 0) return h0_by_union_find(complex);
    return pairs_to_diagram(reduce_boundary_matrix(complex, 1));
}

PersistenceDiagram sublevel_persistence_by_reduction(const ScalarField& field, int dimension) {
    check_dimension(dimension);
    const CubicalComplex complex(field);
    return pairs_to_diagram(reduce_boundary_matrix(complex, dimension));
}

PersistenceDiagram superlevel_persistence(const ScalarField& field, int dimension) {
    return sublevel_persistence(field.negated(), dimension);
}

ConcentrationReport concentration_from_diagrams(
    const std::vector<PersistenceDiagram>& diagrams,
    const std::vector<std::uint64_t>& sample_sizes, std::uint64_t groups, std::uint64_t seed,
    int jobs, double prune_eps) {
    if (diagrams.empty()) throw argument_error("diagram pool is empty");
    if (groups < 1) throw argument_error("at least one group is required");
    if (sample_sizes.empty()) throw argument_error("at least one sample size is required");
    if (prune_eps < 0.0) throw argument_error("prune_eps must be non-negative");
    for (std::uint64_t s : sample_sizes) {
        if (s < 1) throw argument_error("sample sizes must be at least 1");
        if (s * groups > diagrams.size())
            throw argument_error("budget exceeded: size " + std::to_string(s) + " x " +
                                 std::to_string(groups) + " groups needs more than " +
                                 std::to_string(diagrams.size()) + " diagrams");
    }

    ConcentrationReport report;
    report.rows.resize(sample_sizes.size());
    for (std::size_t si = 0; si < sample_sizes.size(); ++si) {
        const std::uint64_t s = sample_sizes[si];
        ConcentrationRow& row = report.rows[si];
        row.sample_size = s;
        row.group_means.resize(groups);

        // Disjoint groups within a size: a seeded shuffle sliced into chunks.
        std::vector<std::size_t> indices(diagrams.size());
        std::iota(indices.begin(), indices.end(), 0);
        CounterRng shuffle_rng(substream_key(seed, 0xC0000000ULL + si));
        for (std::size_t i = indices.size() - 1; i > 0; --i)
            std::swap(indices[i], indices[shuffle_rng.bounded(i + 1)]);

        parallel_for(jobs, groups, [&](std::size_t gi) {
            std::vector<PersistenceDiagram> sample;
            sample.reserve(s);
            for (std::uint64_t k = 0; k < s; ++k)
                sample.push_back(diagrams[indices[gi * s + k]]);
            MeanOptions options;
            options.init = MeanInit::random_input(
                substream_key(seed, 0xD0000000ULL + si * 1000 + gi));
            options.compute_certificate = false;
            PersistenceDiagram mean = compute_mean(sample, options).mean;
            row.group_means[gi] = prune_eps > 0.0 ? prune(mean, prune_eps) : std::move(mean);
        });

        const MultiRestartResult center = multi_restart_mean(
            row.group_means, 4, substream_key(seed, 0xE0000000ULL + si), 200, jobs);
        row.variance = center.best.frechet_value;
    }
    return report;
}

ConcentrationReport concentration_experiment(const FieldConfig& config,
                                             std::uint64_t num_fields,
                                             const std::vector<std::uint64_t>& sample_sizes,
                                             std::uint64_t groups, int dimension,
                                             std::uint64_t seed, int jobs, double prune_eps) {
    check_dimension(dimension);
    if (num_fields < 1) throw argument_error("at least one field is required");
    if (prune_eps < 0.0) throw argument_error("prune_eps must be non-negative");
    for (std::uint64_t s : sample_sizes)
        if (s * groups > num_fields)
            throw argument_error("budget exceeded: max(sample_sizes) * groups must be <= " +
                                 std::to_string(num_fields) + " fields");
    const FieldModel model(config);
    std::vector<PersistenceDiagram> diagrams(num_fields);
    parallel_for(jobs, num_fields, [&](std::size_t f) {
        PersistenceDiagram diagram = superlevel_persistence(model.generate(f), dimension);
        diagrams[f] = prune_eps > 0.0 ? prune(diagram, prune_eps) : std::move(diagram);
    });
    return concentration_from_diagrams(diagrams, sample_sizes, groups, seed, jobs, prune_eps);
}

}  // namespace fpd
