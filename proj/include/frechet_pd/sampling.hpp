#pragma once

#include <cstdint>
#include <vector>

#include "frechet_pd/diagram.hpp"
#include "frechet_pd/frechet.hpp"

namespace fpd {

/// Uniform Dirac mixture (1/m) sum_i delta_{Z_i}.
struct DiracMixture {
    std::vector<PersistenceDiagram> atoms;

    std::size_t size() const { return atoms.size(); }
};

/// Multiplicities of each atom in an iid sample of size n.
struct SampleCounts {
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const {
        std::uint64_t n = 0;
        for (std::uint64_t c : counts) n += c;
        return n;
    }
};

/// Multinomial(n; 1/m, ..., 1/m) draw by sequential binomial conditioning on
/// the counter-based generator; reproducible from (seed, trial index).
SampleCounts sample_counts(const DiracMixture& mixture, std::uint64_t n, std::uint64_t seed);

/// Runs the mean descent on the weighted empirical measure (atom i carrying
/// weight counts[i]) initialized at `init`. All-zero counts are rejected.
FrechetResult empirical_mean_from_counts(const DiracMixture& mixture,
                                         const SampleCounts& counts,
                                         const PersistenceDiagram& init);

struct LlnTrial {
    double d_squared = 0.0;
    bool within_bound = false;
    bool converged = false;
    bool certificate_ok = false;
};

struct LlnReport {
    double bound = 0.0;          // (m^2 F(Y) / n) ln(m / delta)
    double frechet_value = 0.0;  // F(Y) for the mixture
    std::vector<LlnTrial> trials;
    double coverage = 0.0;
    double mean_d_squared = 0.0;
    double max_d_squared = 0.0;
    std::uint64_t certificate_failures = 0;
};

/// Monte-Carlo validation of the concentration bound: for each trial, draw
/// multinomial counts, run the descent from Y on the empirical measure and
/// record d(Y, Y_n)^2 against the bound. Requires Y to pass the
/// local-minimum certificate and n >= 8 m ln(m / delta).
LlnReport lln_experiment(const DiracMixture& mixture, const PersistenceDiagram& y,
                         std::uint64_t n, double delta, std::uint64_t trials,
                         std::uint64_t seed, int jobs = 1);

}  // namespace fpd
