#include <doctest.h>

#include <cmath>

#include "frechet_pd/errors.hpp"
#include "frechet_pd/rng.hpp"
#include "frechet_pd/sampling.hpp"
#include "oracles.hpp"

using namespace fpd;

namespace {

const DiracMixture kTwoAtoms{{PersistenceDiagram({{0.0, 2.0}}), PersistenceDiagram({{0.0, 4.0}})}};
const PersistenceDiagram kCenter({{0.0, 3.0}});

}  // namespace

TEST_CASE("sample_counts: degenerate, moments, reproducibility") {
    const DiracMixture single{{PersistenceDiagram({{0.0, 1.0}})}};
    CHECK(sample_counts(single, 17, 3).counts == std::vector<std::uint64_t>{17});

    // m = 2, n = 1e6: each count within 3 sigma = 1500 of n/2.
    const SampleCounts big = sample_counts(kTwoAtoms, 1000000, 99);
    CHECK(big.total() == 1000000);
    CHECK(std::abs(static_cast<double>(big.counts[0]) - 500000.0) <= 1500.0);

    // Empirical mean of xi_1 over many seeds: E[xi_1] = n / m = 25.
    DiracMixture four{{PersistenceDiagram({{0.0, 1.0}}), PersistenceDiagram({{0.0, 2.0}}),
                       PersistenceDiagram({{0.0, 3.0}}), PersistenceDiagram({{0.0, 4.0}})}};
    double total = 0.0;
    const int seeds = 10000;
    for (int s = 0; s < seeds; ++s)
        total += static_cast<double>(sample_counts(four, 100, substream_key(1234, s)).counts[0]);
    CHECK(total / seeds == doctest::Approx(25.0).epsilon(0.02));

    CHECK(sample_counts(kTwoAtoms, 50, 7).counts == sample_counts(kTwoAtoms, 50, 7).counts);
    CHECK_THROWS_AS(sample_counts(kTwoAtoms, 0, 1), argument_error);
}

TEST_CASE("empirical_mean_from_counts") {
    // Exactly balanced counts reproduce the population local minimum in one pass.
    SampleCounts balanced;
    balanced.counts = {50, 50};
    const FrechetResult same = empirical_mean_from_counts(kTwoAtoms, balanced, kCenter);
    CHECK(same.converged);
    CHECK(same.mean == kCenter);
    CHECK(same.iterations == 1);

    SampleCounts lone;
    lone.counts = {1, 0};
    const FrechetResult single = empirical_mean_from_counts(kTwoAtoms, lone, kCenter);
    CHECK(single.mean == kTwoAtoms.atoms[0]);
    CHECK(single.frechet_value == 0.0);

    // Weighted mean (3*2 + 1*4)/4 = 2.5, cross-checked by replication.
    SampleCounts skewed;
    skewed.counts = {3, 1};
    const FrechetResult weighted = empirical_mean_from_counts(kTwoAtoms, skewed, kCenter);
    CHECK(weighted.mean == PersistenceDiagram({{0.0, 2.5}}));
    MeanOptions options;
    options.init = MeanInit::given(kCenter);
    const FrechetResult replicated =
        compute_mean({kTwoAtoms.atoms[0], kTwoAtoms.atoms[0], kTwoAtoms.atoms[0],
                      kTwoAtoms.atoms[1]},
                     options);
    CHECK(weighted.mean == replicated.mean);
    CHECK(weighted.frechet_value == doctest::Approx(replicated.frechet_value).epsilon(1e-14));

    SampleCounts zero;
    zero.counts = {0, 0};
    CHECK_THROWS_AS(empirical_mean_from_counts(kTwoAtoms, zero, kCenter), argument_error);
}

TEST_CASE("lln_experiment validates its preconditions") {
    // n below 8 m ln(m / delta) is rejected with the threshold in the message.
    CHECK_THROWS_WITH_AS(lln_experiment(kTwoAtoms, kCenter, 10, 0.1, 10, 1),
                         doctest::Contains("8 m ln"), argument_error);
    // Y must pass the local-minimum certificate.
    CHECK_THROWS_AS(
        lln_experiment(kTwoAtoms, PersistenceDiagram({{0.0, 3.7}}), 100, 0.1, 10, 1),
        argument_error);
    CHECK_THROWS_AS(lln_experiment(kTwoAtoms, kCenter, 100, 0.0, 10, 1), argument_error);
}

TEST_CASE("lln_experiment: canonical two-atom setup") {
    const LlnReport report = lln_experiment(kTwoAtoms, kCenter, 100, 0.1, 400, 2024);
    CHECK(report.frechet_value == doctest::Approx(1.0).epsilon(1e-12));
    // (m^2 F / n) ln(m / delta) = 0.04 ln(20).
    CHECK(report.bound == doctest::Approx(0.11983).epsilon(1e-4));
    CHECK(report.coverage >= 0.95);
    CHECK(report.mean_d_squared == doctest::Approx(0.01).epsilon(0.35));
    CHECK(report.certificate_failures == 0);
    for (const LlnTrial& trial : report.trials) CHECK(trial.converged);
}

TEST_CASE("lln_experiment: single atom has no sampling variability") {
    const DiracMixture single{{PersistenceDiagram({{1.0, 2.0}})}};
    const LlnReport report = lln_experiment(single, single.atoms[0], 64, 0.25, 50, 7);
    CHECK(report.coverage == 1.0);
    CHECK(report.max_d_squared == 0.0);
}

TEST_CASE("lln_experiment is deterministic and job-count independent") {
    const LlnReport a = lln_experiment(kTwoAtoms, kCenter, 100, 0.1, 60, 5, 1);
    const LlnReport b = lln_experiment(kTwoAtoms, kCenter, 100, 0.1, 60, 5, 2);
    REQUIRE(a.trials.size() == b.trials.size());
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
        CHECK(a.trials[i].d_squared == b.trials[i].d_squared);
        CHECK(a.trials[i].within_bound == b.trials[i].within_bound);
    }
    CHECK(a.coverage == b.coverage);
    CHECK(a.mean_d_squared == b.mean_d_squared);
}

TEST_CASE("coverage bound holds across (m, n, delta) configurations") {
    struct Config {
        DiracMixture mixture;
        PersistenceDiagram y;
        std::uint64_t n;
        double delta;
    };
    const std::vector<Config> configs = {
        {kTwoAtoms, kCenter, 100, 0.1},
        {kTwoAtoms, kCenter, 400, 0.25},
        {DiracMixture{{PersistenceDiagram({{0.0, 2.0}}), PersistenceDiagram({{0.0, 3.0}}),
                       PersistenceDiagram({{0.0, 4.0}})}},
         kCenter, 200, 0.2},
        {DiracMixture{{PersistenceDiagram({{0.0, 2.0}, {3.0, 6.0}}),
                       PersistenceDiagram({{0.0, 4.0}, {3.0, 8.0}})}},
         PersistenceDiagram({{0.0, 3.0}, {3.0, 7.0}}), 150, 0.1},
    };
    const std::uint64_t trials = 300;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        const Config& config = configs[c];
        const LlnReport report = lln_experiment(config.mixture, config.y, config.n,
                                                config.delta, trials, 400 + c);
        const double slack =
            3.0 * std::sqrt(config.delta * (1.0 - config.delta) / static_cast<double>(trials));
        CHECK(report.coverage >= 1.0 - config.delta - slack);
    }
}

TEST_CASE("mean squared deviation scales like 1/n") {
    const double at_100 =
        lln_experiment(kTwoAtoms, kCenter, 100, 0.1, 600, 11).mean_d_squared;
    const double at_1600 =
        lln_experiment(kTwoAtoms, kCenter, 1600, 0.1, 600, 11).mean_d_squared;
    const double ratio = at_100 / at_1600;
    CHECK(ratio > 8.0);
    CHECK(ratio < 32.0);
}
