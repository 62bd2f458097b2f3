#include <doctest.h>

#include <cmath>
#include <optional>

#include "frechet_pd/errors.hpp"
#include "frechet_pd/frechet.hpp"
#include "frechet_pd/geometry.hpp"
#include "frechet_pd/rng.hpp"
#include "oracles.hpp"

using namespace fpd;

namespace {

const PersistenceDiagram kLow({{0.0, 2.0}});
const PersistenceDiagram kHigh({{0.0, 4.0}});
const PersistenceDiagram kSquareX({{1.0, 3.0}, {2.0, 4.0}});
const PersistenceDiagram kSquareY({{1.0, 4.0}, {2.0, 3.0}});

std::optional<DiagramPoint> pt(double b, double d) { return DiagramPoint{b, d}; }

void check_trace_monotone(const std::vector<double>& trace) {
    for (std::size_t i = 0; i + 2 < trace.size(); ++i) CHECK(trace[i] > trace[i + 1]);
    if (trace.size() >= 2) CHECK(trace[trace.size() - 2] >= trace.back());
}

}  // namespace

TEST_CASE("frechet_function examples") {
    CHECK(frechet_function(PersistenceDiagram({{0.0, 3.0}}), {kLow, kHigh}) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(frechet_function(kLow, {kLow}) == 0.0);
    CHECK(frechet_function(PersistenceDiagram(), {PersistenceDiagram({{1.0, 3.0}})}) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(frechet_function(kLow, {}), argument_error);
}

TEST_CASE("mean_of_matched examples") {
    const std::vector<std::optional<DiagramPoint>> plain{pt(0, 2), pt(0, 4)};
    CHECK(*mean_of_matched(plain) == DiagramPoint{0.0, 3.0});

    // One diagonal copy pulls the mean halfway to the projection.
    const std::vector<std::optional<DiagramPoint>> with_diag{pt(0, 2), std::nullopt};
    CHECK(*mean_of_matched(with_diag) == DiagramPoint{0.5, 1.5});

    const std::vector<std::optional<DiagramPoint>> all_diag{std::nullopt, std::nullopt};
    CHECK(!mean_of_matched(all_diag).has_value());

    CHECK_THROWS_AS(mean_of_matched({}), argument_error);

    const std::vector<std::optional<DiagramPoint>> weighted{pt(0, 2), pt(0, 4)};
    const std::vector<double> weights{3.0, 1.0};
    CHECK(*mean_of_matched_weighted(weighted, weights) == DiagramPoint{0.0, 2.5});
}

TEST_CASE("compute_mean: two diagrams from a given start") {
    MeanOptions options;
    options.init = MeanInit::given(kLow);
    const FrechetResult result = compute_mean({kLow, kHigh}, options);
    CHECK(result.converged);
    CHECK(result.mean == PersistenceDiagram({{0.0, 3.0}}));
    CHECK(result.frechet_value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(result.iterations == 2);
    REQUIRE(result.trace.size() == 2);
    CHECK(result.trace[0] == doctest::Approx(2.0));
    CHECK(result.trace[1] == doctest::Approx(1.0));
    CHECK(result.certificate.supporting_vector_norm <= 1e-9);
    CHECK(result.certificate.pairings_unique == TriState::yes);
    REQUIRE(result.pairings.size() == 2);
}

TEST_CASE("compute_mean: Dirac input is its own mean") {
    const PersistenceDiagram d({{0.5, 1.5}, {2.0, 5.0}});
    MeanOptions options;
    options.init = MeanInit::random_input(7);
    const FrechetResult result = compute_mean({d, d}, options);
    CHECK(result.converged);
    CHECK(result.mean == d);
    CHECK(result.frechet_value == 0.0);
}

TEST_CASE("compute_mean: point and empty diagram against grid-search oracle") {
    const PersistenceDiagram x({{0.0, 0.2}});
    MeanOptions options;
    options.init = MeanInit::given(x);
    const FrechetResult result = compute_mean({x, PersistenceDiagram()}, options);
    CHECK(result.converged);
    REQUIRE(result.mean.size() == 1);
    CHECK(result.mean[0].birth == doctest::Approx(0.05).epsilon(1e-13));
    CHECK(result.mean[0].death == doctest::Approx(0.15).epsilon(1e-13));
    CHECK(result.frechet_value == doctest::Approx(0.005).epsilon(1e-12));

    // Independent grid search over single-point candidates.
    double best_value = 1e30, best_birth = 0.0, best_death = 0.0;
    for (int bi = -40; bi <= 40; ++bi) {
        for (int di = 1; di <= 100; ++di) {
            const double birth = bi * 0.0025;
            const double death = birth + di * 0.0025;
            const PersistenceDiagram candidate({{birth, death}});
            const double value =
                0.5 * (oracles::squared_wasserstein(candidate, x, Ground::euclidean) +
                       oracles::squared_wasserstein(candidate, PersistenceDiagram(),
                                                    Ground::euclidean));
            if (value < best_value) {
                best_value = value;
                best_birth = birth;
                best_death = death;
            }
        }
    }
    CHECK(best_birth == doctest::Approx(0.05).epsilon(0.051));
    CHECK(best_death == doctest::Approx(0.15).epsilon(0.02));
    CHECK(result.frechet_value <= best_value + 1e-12);
}

TEST_CASE("compute_mean midpoint initialization") {
    MeanOptions options;
    options.init = MeanInit::midpoint(13);
    const FrechetResult result = compute_mean({kLow, kHigh}, options);
    CHECK(result.converged);
    CHECK(result.mean == PersistenceDiagram({{0.0, 3.0}}));
    // The midpoint of the two inputs is already the local minimum.
    CHECK(result.iterations == 1);
}

TEST_CASE("compute_mean flags exhausted iteration budgets") {
    MeanOptions options;
    options.init = MeanInit::given(kLow);
    options.max_iter = 1;
    const FrechetResult result = compute_mean({kLow, kHigh}, options);
    CHECK(!result.converged);

    options.max_iter = 0;
    CHECK_THROWS_AS(compute_mean({kLow, kHigh}, options), argument_error);
}

TEST_CASE("compute_mean trace decreases and certificates hold on random instances") {
    CounterRng rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t m = 2 + rng.bounded(3);
        std::vector<PersistenceDiagram> diagrams;
        for (std::size_t i = 0; i < m; ++i)
            diagrams.push_back(oracles::random_diagram(rng, 4));
        MeanOptions options;
        options.init = MeanInit::random_input(rng.next_u64());
        const FrechetResult result = compute_mean(diagrams, options);
        REQUIRE(result.converged);
        check_trace_monotone(result.trace);
        CHECK(result.certificate.supporting_vector_norm <= 1e-9);
        CHECK(result.certificate.pairings_unique != TriState::no);
        // Independent recomputation of the reported value.
        const double recomputed = frechet_function(result.mean, diagrams);
        CHECK(result.frechet_value ==
              doctest::Approx(recomputed).epsilon(1e-10));
        // Each mean point is the arithmetic mean of its final matches.
        for (std::size_t j = 0; j < result.mean.size(); ++j) {
            std::vector<std::optional<DiagramPoint>> group(m, std::nullopt);
            for (std::size_t i = 0; i < m; ++i)
                for (const Match& match : result.pairings[i].matches)
                    if (match.source == static_cast<int>(j) && match.target != kDiagonal)
                        group[i] = diagrams[i][static_cast<std::size_t>(match.target)];
            const auto mean = mean_of_matched(group);
            REQUIRE(mean.has_value());
            CHECK(std::abs(mean->birth - result.mean[j].birth) <= 1e-9);
            CHECK(std::abs(mean->death - result.mean[j].death) <= 1e-9);
        }
    }
}

TEST_CASE("weighted descent equals the replicated unweighted descent") {
    const PersistenceDiagram init({{0.0, 3.0}});
    MeanOptions options;
    options.init = MeanInit::given(init);
    const FrechetResult weighted = compute_mean_weighted({kLow, kHigh}, {3.0, 1.0}, options);
    const FrechetResult replicated = compute_mean({kLow, kLow, kLow, kHigh}, options);
    CHECK(weighted.mean == replicated.mean);
    CHECK(weighted.frechet_value == doctest::Approx(replicated.frechet_value).epsilon(1e-14));
    CHECK(weighted.mean == PersistenceDiagram({{0.0, 2.5}}));
}

TEST_CASE("multi_restart_mean on simple and adversarial instances") {
    const MultiRestartResult dirac = multi_restart_mean({kLow, kLow, kLow}, 8, 5);
    CHECK(dirac.restarts_converged == 8);
    REQUIRE(dirac.minima.size() == 1);
    CHECK(dirac.minima[0] == kLow);
    CHECK(dirac.best.frechet_value == 0.0);

    const MultiRestartResult two = multi_restart_mean({kLow, kHigh}, 12, 5);
    REQUIRE(two.minima.size() == 1);
    CHECK(two.minima[0] == PersistenceDiagram({{0.0, 3.0}}));
    CHECK(two.best.frechet_value == doctest::Approx(1.0));

    // The square instance has two local minima (the oracle enumerates both);
    // every deterministic restart lands in one of them at the global value.
    const MultiRestartResult square = multi_restart_mean({kSquareX, kSquareY}, 20, 5);
    CHECK(square.best.frechet_value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(square.minima.size() >= 1);
    CHECK(square.minima.size() <= 2);
    const OracleResult oracle = oracle_global_mean({kSquareX, kSquareY});
    for (const PersistenceDiagram& found : square.minima) {
        bool matches_oracle_minimum = false;
        for (const PersistenceDiagram& candidate :
             {PersistenceDiagram({{1.0, 3.5}, {2.0, 3.5}}),
              PersistenceDiagram({{1.5, 3.0}, {1.5, 4.0}})})
            if (distance(found, candidate, Ground::euclidean) < 1e-9)
                matches_oracle_minimum = true;
        CHECK(matches_oracle_minimum);
    }
    CHECK(square.best.frechet_value == doctest::Approx(oracle.frechet_value).epsilon(1e-12));

    CHECK_THROWS_AS(multi_restart_mean({kLow}, 0, 1), argument_error);
}

TEST_CASE("multiplicity: duplicate points flow through descent and oracle") {
    const PersistenceDiagram doubled({{0.0, 2.0}, {0.0, 2.0}});
    const PersistenceDiagram single({{0.0, 4.0}});
    const OracleResult oracle = oracle_global_mean({doubled, single});
    const MultiRestartResult search = multi_restart_mean({doubled, single}, 10, 3);
    CHECK(search.best.converged);
    CHECK(search.best.frechet_value >= oracle.frechet_value - 1e-10);
    CHECK(search.best.frechet_value <= oracle.frechet_value + 1e-10);
    CHECK(search.best.certificate.supporting_vector_norm <= 1e-9);
    // Both descent and oracle agree with an independent evaluation.
    CHECK(frechet_function(search.best.mean, {doubled, single}) ==
          doctest::Approx(oracle.frechet_value).epsilon(1e-10));
}

TEST_CASE("oracle_global_mean examples") {
    const OracleResult two = oracle_global_mean({kLow, kHigh});
    CHECK(two.mean == PersistenceDiagram({{0.0, 3.0}}));
    CHECK(two.frechet_value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(two.num_local_minima == 1);

    const PersistenceDiagram d({{0.25, 1.0}});
    const OracleResult dirac = oracle_global_mean({d});
    CHECK(dirac.mean == d);
    CHECK(dirac.frechet_value == 0.0);
    CHECK(dirac.num_local_minima == 1);

    const OracleResult square = oracle_global_mean({kSquareX, kSquareY});
    CHECK(square.frechet_value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(square.num_local_minima == 2);

    const OracleResult empty = oracle_global_mean({PersistenceDiagram()});
    CHECK(empty.mean.empty());
    CHECK(empty.frechet_value == 0.0);
}

TEST_CASE("oracle capacity guard names the bound") {
    std::vector<DiagramPoint> many;
    for (int i = 0; i < 100001; ++i) {
        const double b = static_cast<double>(i);
        many.push_back({b, b + 1.0});
    }
    CHECK_THROWS_WITH_AS(oracle_global_mean({PersistenceDiagram(many)}),
                         doctest::Contains("100000"), capacity_error);
}

TEST_CASE("multi_restart attains the oracle value on random small instances") {
    CounterRng rng(42);
    int matched = 0;
    const int total = 12;
    for (int trial = 0; trial < total; ++trial) {
        const std::size_t m = 2 + rng.bounded(2);
        std::vector<PersistenceDiagram> diagrams;
        for (std::size_t i = 0; i < m; ++i)
            diagrams.push_back(oracles::nonempty_random_diagram(rng, 3));
        const OracleResult oracle = oracle_global_mean(diagrams);
        const MultiRestartResult search = multi_restart_mean(diagrams, 20, rng.next_u64());
        CHECK(search.best.frechet_value >= oracle.frechet_value - 1e-10);
        if (search.best.frechet_value <= oracle.frechet_value + 1e-10) ++matched;
        CHECK(search.minima.size() >= 1);
    }
    CHECK(matched >= total - 1);
}
