#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "frechet_pd/diagram.hpp"

namespace fpd {

/// Gaussian random field configuration on the unit square: grid_size
/// vertices per side, squared-exponential covariance exp(-alpha |p-q|^2),
/// and a diagonal jitter regularizing the (numerically rank-deficient)
/// covariance matrix.
struct FieldConfig {
    int grid_size = 32;
    double alpha = 100.0;
    std::uint64_t seed = 0;
    double jitter = 1e-10;
};

/// Gridded field realization; vertex (i, j) sits at (i, j) / (grid_size - 1).
class ScalarField {
public:
    ScalarField(int grid_size, std::vector<double> values);

    int grid_size() const { return grid_size_; }
    double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * grid_size_ + j]; }
    std::span<const double> values() const { return values_; }

    ScalarField negated() const;

private:
    int grid_size_;
    std::vector<double> values_;
};

double squared_exponential_covariance(double alpha, double dx, double dy);

/// Dense Cholesky factor of the covariance, computed once and reused for any
/// number of reproducible draws. Guarded at grid_size^2 <= 10^4 vertices.
class FieldModel {
public:
    explicit FieldModel(const FieldConfig& config);

    /// Mean-zero draw indexed by field_index; depends only on
    /// (config.seed, field_index), independent of evaluation order.
    ScalarField generate(std::uint64_t field_index) const;

    const FieldConfig& config() const { return config_; }

private:
    FieldConfig config_;
    std::size_t num_vertices_;
    std::vector<double> cholesky_;  // lower triangle, row-major
};

ScalarField generate_field(const FieldConfig& config);

/// Sublevel lower-star cubical persistence (cell value = max over its
/// vertices): H0 by union-find, H1 by boundary-matrix reduction over Z2.
/// Infinite bars and zero-persistence pairs are dropped.
PersistenceDiagram sublevel_persistence(const ScalarField& field, int dimension);

/// Same pairs computed entirely by boundary-matrix reduction; the
/// independent route for the H0 union-find output.
PersistenceDiagram sublevel_persistence_by_reduction(const ScalarField& field, int dimension);

/// Superlevel filtration of f realized as the sublevel filtration of -f;
/// pairs come back in the sublevel convention (birth < death).
PersistenceDiagram superlevel_persistence(const ScalarField& field, int dimension);

struct ConcentrationRow {
    std::uint64_t sample_size = 0;
    double variance = 0.0;  // Frechet function value at the mean of the group means
    std::vector<PersistenceDiagram> group_means;
};

struct ConcentrationReport {
    std::vector<ConcentrationRow> rows;
};

/// Draws `groups` disjoint samples of each size from the diagram pool,
/// computes each sample's Frechet mean, then the variance of those means.
/// prune_eps > 0 drops group-mean points below that persistence before the
/// variance step; descent over many diagrams otherwise accumulates
/// near-diagonal points whose mass is negligible but whose count dominates
/// the assignment solves.
ConcentrationReport concentration_from_diagrams(
    const std::vector<PersistenceDiagram>& diagrams,
    const std::vector<std::uint64_t>& sample_sizes, std::uint64_t groups, std::uint64_t seed,
    int jobs = 1, double prune_eps = 0.0);

/// End-to-end experiment: generates num_fields superlevel diagrams of the
/// requested dimension, prunes them at the persistence floor (the analog of
/// running the filtration over a few hundred discrete levels), then runs the
/// concentration analysis above. Requires max(sample_sizes) * groups <=
/// num_fields.
ConcentrationReport concentration_experiment(const FieldConfig& config,
                                             std::uint64_t num_fields,
                                             const std::vector<std::uint64_t>& sample_sizes,
                                             std::uint64_t groups, int dimension,
                                             std::uint64_t seed, int jobs = 1,
                                             double prune_eps = 0.05);

}  // namespace fpd
