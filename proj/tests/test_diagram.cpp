#include <doctest.h>

#include <cmath>

#include "frechet_pd/diagram.hpp"
#include "frechet_pd/diagram_io.hpp"
#include "frechet_pd/errors.hpp"
#include "frechet_pd/rng.hpp"
#include "oracles.hpp"

using namespace fpd;

TEST_CASE("diagram construction enforces death > birth and canonical order") {
    const PersistenceDiagram d({{1.0, 3.0}, {0.0, 2.0}});
    REQUIRE(d.size() == 2);
    CHECK(d[0] == DiagramPoint{0.0, 2.0});
    CHECK(d[1] == DiagramPoint{1.0, 3.0});

    CHECK_THROWS_AS(PersistenceDiagram({{3.0, 1.0}}), argument_error);
    CHECK_THROWS_AS(PersistenceDiagram({{2.0, 2.0}}), argument_error);
    CHECK_THROWS_AS(PersistenceDiagram({{0.0, std::numeric_limits<double>::infinity()}}),
                    argument_error);
    CHECK_THROWS_WITH_AS(PersistenceDiagram({{3.0, 1.0}}),
                         doctest::Contains("death must exceed birth"), argument_error);
}

TEST_CASE("diagonal projection and distances") {
    CHECK(diagonal_projection({1.0, 3.0}) == PlanarPoint{2.0, 2.0});
    CHECK(diagonal_projection({0.0, 0.5}) == PlanarPoint{0.25, 0.25});
    const double eps = 1e-6;
    const PlanarPoint near = diagonal_projection({5.0, 5.0 + eps});
    CHECK(near.x == doctest::Approx(5.0 + eps / 2).epsilon(1e-15));

    CHECK(diagonal_distance({1.0, 3.0}, Ground::euclidean) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(diagonal_distance({1.0, 3.0}, Ground::chebyshev) == doctest::Approx(1.0));
    CHECK(diagonal_distance({2.0, 2.0 + 1e-9}, Ground::euclidean) ==
          doctest::Approx(1e-9 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("chebyshev-euclidean sandwich per point") {
    CounterRng rng(11);
    for (int i = 0; i < 200; ++i) {
        const double birth = rng.uniform(-5.0, 5.0);
        const DiagramPoint p{birth, birth + rng.uniform(1e-9, 10.0)};
        const double cheb = diagonal_distance(p, Ground::chebyshev);
        const double eucl = diagonal_distance(p, Ground::euclidean);
        CHECK(cheb <= eucl + 1e-15);
        CHECK(eucl <= std::sqrt(2.0) * cheb + 1e-15);
    }
}

TEST_CASE("persistence filters") {
    const PersistenceDiagram z({{0.0, 1.0}, {0.0, 3.0}});
    CHECK(upper_filter(z, 2.0) == PersistenceDiagram({{0.0, 3.0}}));
    CHECK(lower_filter(z, 2.0) == PersistenceDiagram({{0.0, 1.0}}));
    CHECK(upper_filter(PersistenceDiagram({{0.0, 1.0}}), 0.5) ==
          PersistenceDiagram({{0.0, 1.0}}));
    CHECK(upper_filter(PersistenceDiagram(), 1.0).empty());

    // Strict boundary: persistence exactly alpha stays in the upper part.
    const PersistenceDiagram single({{0.0, 3.0}});
    CHECK(lower_filter(single, 3.0001) == single);
    CHECK(lower_filter(single, 3.0).empty());
    CHECK(upper_filter(single, 3.0) == single);

    CHECK_THROWS_AS(upper_filter(z, 0.0), argument_error);
    CHECK_THROWS_AS(lower_filter(z, -1.0), argument_error);
}

TEST_CASE("filters partition the diagram") {
    CounterRng rng(12);
    for (int i = 0; i < 50; ++i) {
        const PersistenceDiagram z = oracles::random_diagram(rng, 8);
        const double alpha = rng.uniform(0.1, 12.0);
        const PersistenceDiagram up = upper_filter(z, alpha);
        const PersistenceDiagram low = lower_filter(z, alpha);
        std::vector<DiagramPoint> merged(up.points().begin(), up.points().end());
        merged.insert(merged.end(), low.points().begin(), low.points().end());
        CHECK(PersistenceDiagram(merged) == z);
    }
}

TEST_CASE("prune drops low persistence points") {
    const PersistenceDiagram z({{0.0, 0.5}, {0.0, 3.0}});
    CHECK(prune(z, 1.0) == PersistenceDiagram({{0.0, 3.0}}));
    CHECK(prune(z, 0.0) == z);
}

TEST_CASE("json read and canonical write") {
    const PersistenceDiagram d = read_diagram(R"({"points":[[1,3],[0,2]]})", Format::json);
    REQUIRE(d.size() == 2);
    CHECK(d[0] == DiagramPoint{0.0, 2.0});
    CHECK(d[1] == DiagramPoint{1.0, 3.0});
    CHECK(write_diagram(d, Format::json) == "{\"points\":[[0,2],[1,3]]}");

    CHECK(read_diagram(R"({"points":[]})", Format::json).empty());
    CHECK(write_diagram(PersistenceDiagram(), Format::json) == "{\"points\":[]}");

    CHECK_THROWS_WITH_AS(read_diagram(R"({"points":[[3,1]]})", Format::json),
                         doctest::Contains("death must exceed birth"), argument_error);
    CHECK_THROWS_AS(read_diagram("{\"points\":[[1,", Format::json), parse_error);
    CHECK_THROWS_AS(read_diagram(R"({"nope":[]})", Format::json), parse_error);
}

TEST_CASE("json rejects malformed shapes") {
    CHECK_THROWS_AS(read_diagram("[1,2]", Format::json), parse_error);
    CHECK_THROWS_AS(read_diagram(R"({"points":[[1]]})", Format::json), parse_error);
    CHECK_THROWS_AS(read_diagram(R"({"points":[["a","b"]]})", Format::json), parse_error);
    CHECK_THROWS_AS(read_diagram(R"({"points":[[1,2,3]]})", Format::json), parse_error);
    CHECK_THROWS_AS(read_diagram(R"({"points":42})", Format::json), parse_error);
    // Overflowing literals are rejected at parse time.
    CHECK_THROWS_AS(read_diagram(R"({"points":[[1,1e999]]})", Format::json), parse_error);
}

TEST_CASE("csv read and write") {
    const PersistenceDiagram d = read_diagram("birth,death\n1,3\n0,2\n", Format::csv);
    REQUIRE(d.size() == 2);
    CHECK(write_diagram(d, Format::csv) == "birth,death\n0,2\n1,3\n");

    // Header is optional.
    CHECK(read_diagram("1,3\n", Format::csv) == PersistenceDiagram({{1.0, 3.0}}));
    CHECK(read_diagram("", Format::csv).empty());

    CHECK_THROWS_WITH_AS(read_diagram("birth,death\n1;3\n", Format::csv),
                         doctest::Contains("line 2"), parse_error);
    CHECK_THROWS_WITH_AS(read_diagram("1,zzz\n", Format::csv), doctest::Contains("zzz"),
                         parse_error);
}

TEST_CASE("round trips: write(read(s)) byte-identical, read(write(d)) == d") {
    CounterRng rng(13);
    for (int i = 0; i < 40; ++i) {
        const PersistenceDiagram d = oracles::random_diagram(rng, 10, -3.0, 7.0);
        for (const Format format : {Format::json, Format::csv}) {
            const std::string canonical = write_diagram(d, format);
            CHECK(read_diagram(canonical, format) == d);
            CHECK(write_diagram(read_diagram(canonical, format), format) == canonical);
        }
    }
}

TEST_CASE("17-digit serialization survives in full precision") {
    const PersistenceDiagram d({{0.1, 1.0 / 3.0}, {-1e-17, 2.0000000000000004}});
    const PersistenceDiagram back = read_diagram(write_diagram(d, Format::json), Format::json);
    REQUIRE(back.size() == 2);
    CHECK(back[0].birth == d[0].birth);
    CHECK(back[0].death == d[0].death);
    CHECK(back[1].birth == d[1].birth);
    CHECK(back[1].death == d[1].death);
}

TEST_CASE("format_for_path") {
    CHECK(format_for_path("a.csv") == Format::csv);
    CHECK(format_for_path("a.json") == Format::json);
    CHECK(format_for_path("noext") == Format::json);
}
