#include "frechet_pd/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "frechet_pd/errors.hpp"
#include "frechet_pd/geometry.hpp"
#include "frechet_pd/parallel.hpp"
#include "frechet_pd/rng.hpp"

namespace fpd {

SampleCounts sample_counts(const DiracMixture& mixture, std::uint64_t n, std::uint64_t seed) {
    const std::size_t m = mixture.size();
    if (m == 0) throw argument_error("mixture must have at least one atom");
    if (n < 1) throw argument_error("sample size n must be at least 1");
    SampleCounts counts;
    counts.counts.assign(m, 0);
    CounterRng rng(seed);
    std::uint64_t remaining = n;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double p = 1.0 / static_cast<double>(m - i);
        counts.counts[i] = rng.binomial(remaining, p);
        remaining -= counts.counts[i];
    }
    counts.counts[m - 1] = remaining;
    return counts;
}

FrechetResult empirical_mean_from_counts(const DiracMixture& mixture,
                                         const SampleCounts& counts,
                                         const PersistenceDiagram& init) {
    if (counts.counts.size() != mixture.size())
        throw argument_error("counts must match the number of mixture atoms");
    std::vector<PersistenceDiagram> atoms;
    std::vector<double> weights;
    for (std::size_t i = 0; i < mixture.size(); ++i) {
        if (counts.counts[i] == 0) continue;
        atoms.push_back(mixture.atoms[i]);
        weights.push_back(static_cast<double>(counts.counts[i]));
    }
    if (atoms.empty()) throw argument_error("all sample counts are zero");
    MeanOptions options;
    options.init = MeanInit::given(init);
    return compute_mean_weighted(atoms, weights, options);
}

namespace {

void require_local_minimum(const DiracMixture& mixture, const PersistenceDiagram& y) {
    constexpr double kTol = 1e-9;
    const double norm = supporting_vector(y, mixture.atoms).norm();
    if (norm > kTol)
        throw argument_error(
            "Y fails the local-minimum certificate: supporting vector norm " +
            std::to_string(norm) + " exceeds " + std::to_string(kTol));
    for (const PersistenceDiagram& atom : mixture.atoms) {
        const Pairing pairing = optimal_pairing(y, atom, Ground::euclidean);
        for (const Match& match : pairing.matches)
            if (match.source == kDiagonal)
                throw argument_error(
                    "Y fails the local-minimum certificate: an input point pairs with "
                    "the diagonal of Y");
        if (y.size() + atom.size() <= 12 &&
            count_optimal_pairings(y, atom, Ground::euclidean, kTol) != 1)
            throw argument_error(
                "Y fails the local-minimum certificate: optimal pairings are not unique");
    }
}

}  // namespace

LlnReport lln_experiment(const DiracMixture& mixture, const PersistenceDiagram& y,
                         std::uint64_t n, double delta, std::uint64_t trials,
                         std::uint64_t seed, int jobs) {
    const std::size_t m = mixture.size();
    if (m == 0) throw argument_error("mixture must have at least one atom");
    if (!(delta > 0.0 && delta < 1.0)) throw argument_error("delta must lie in (0, 1)");
    if (trials < 1) throw argument_error("at least one trial is required");
    const double md = static_cast<double>(m);
    const double threshold = 8.0 * md * std::log(md / delta);
    if (static_cast<double>(n) < threshold)
        throw argument_error("n = " + std::to_string(n) +
                             " violates the precondition n >= 8 m ln(m/delta) = " +
                             std::to_string(threshold));
    require_local_minimum(mixture, y);

    LlnReport report;
    report.frechet_value = frechet_function(y, mixture.atoms);
    report.bound =
        md * md * report.frechet_value / static_cast<double>(n) * std::log(md / delta);
    report.trials.assign(trials, {});

    parallel_for(jobs, trials, [&](std::size_t t) {
        const SampleCounts counts = sample_counts(mixture, n, substream_key(seed, t));
        const FrechetResult run = empirical_mean_from_counts(mixture, counts, y);
        LlnTrial& trial = report.trials[t];
        trial.d_squared = squared_distance(y, run.mean, Ground::euclidean);
        trial.within_bound = trial.d_squared <= report.bound;
        trial.converged = run.converged;
        trial.certificate_ok =
            run.converged && run.certificate.supporting_vector_norm <= 1e-9 &&
            run.certificate.pairings_unique != TriState::no;
    });

    std::uint64_t within = 0;
    CompensatedSum sum;
    for (const LlnTrial& trial : report.trials) {
        if (trial.within_bound) ++within;
        if (!trial.certificate_ok) ++report.certificate_failures;
        sum.add(trial.d_squared);
        report.max_d_squared = std::max(report.max_d_squared, trial.d_squared);
    }
    report.coverage = static_cast<double>(within) / static_cast<double>(trials);
    report.mean_d_squared = sum.value() / static_cast<double>(trials);
    return report;
}

}  // namespace fpd
