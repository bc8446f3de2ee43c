#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wrb/dynamics.hpp"
#include "wrb/rng.hpp"
#include "wrb/space.hpp"

TEST_CASE("a dirac is a fixed point of the barycenter map", "[dynamics]") {
    const auto s = wrb::build_circle(12);
    const auto report = wrb::orbit(s, wrb::dirac(s, 3));
    REQUIRE(report.period.has_value());
    CHECK(*report.period == 1);
    CHECK(report.entry_index == 0);
    REQUIRE(report.iterates.size() == 2);
    CHECK(report.iterates[1].weights[3] == 1.0);
    for (const double v : report.variances) CHECK(v == 0.0);
}

TEST_CASE("four equispaced atoms oscillate with period two", "[dynamics]") {
    const auto s = wrb::build_circle(16);
    const auto report = wrb::orbit(s, wrb::uniform_on(s, {0, 4, 8, 12}));
    REQUIRE(report.period.has_value());
    CHECK(*report.period == 2);
    CHECK(report.entry_index == 0);
    REQUIRE(report.iterates.size() == 3);
    // both iterates move every atom a quarter of the atom spacing
    CHECK(report.w2_to_prev[1] == Catch::Approx(M_PI / 4.0).margin(1e-12));
    CHECK(report.w2_to_prev[2] == Catch::Approx(M_PI / 4.0).margin(1e-12));
    for (int y = 0; y < 16; ++y)
        CHECK(report.iterates[2].weights[y] == report.iterates[0].weights[y]);
    CHECK(wrb::variance_sequence(report).ok());
}

TEST_CASE("polar mass swings to the equator and back", "[dynamics]") {
    const auto s = wrb::build_sphere_grid(5, 8);
    const auto report = wrb::orbit(s, wrb::uniform_on(s, {0, 1}));
    REQUIRE(report.period.has_value());
    CHECK(*report.period == 2);
    CHECK(report.entry_index == 0);
    const double q = (M_PI / 2.0) * (M_PI / 2.0);
    CHECK(std::abs(report.variances[0] - q) < 1e-10);
    CHECK(std::abs(report.variances[1] - q) < 1e-10);
    CHECK(wrb::variance_sequence(report).ok());
}

TEST_CASE("three equispaced atoms form a fixed measure", "[dynamics]") {
    const auto s = wrb::build_circle(12);
    const auto report = wrb::orbit(s, wrb::uniform_on(s, {0, 4, 8}));
    REQUIRE(report.period.has_value());
    CHECK(*report.period == 1);
    CHECK((report.entry_index == 0 || report.entry_index == 1));
}

TEST_CASE("orbit bookkeeping respects max_iter and bad arguments", "[dynamics]") {
    const auto s = wrb::build_circle(8);
    const auto report = wrb::orbit(s, wrb::uniform_on(s, {0, 4}), 0);
    CHECK_FALSE(report.period.has_value());
    CHECK(report.entry_index == -1);
    CHECK(report.iterates.size() == 1);

    const wrb::Tolerances tol = wrb::Tolerances::for_space(s);
    CHECK_THROWS_AS(wrb::orbit(s, wrb::dirac(s, 0), 10, 0.0, tol),
                    std::invalid_argument);
    CHECK_THROWS_AS(wrb::orbit(s, wrb::dirac(s, 0), -1, tol.match_tol, tol),
                    std::invalid_argument);
}

TEST_CASE("random orbits settle into one- or two-cycles", "[dynamics]") {
    wrb::SplitMix64 rng(20250214ull);
    for (int t = 0; t < 25; ++t) {
        const auto s = wrb::random_graph_space(
            5 + static_cast<int>(rng.below(25)), static_cast<int>(rng.below(30)),
            rng, t % 2 == 0);
        const auto mu = (t % 3 == 0)
                            ? wrb::random_sparse_measure(
                                  s, 1 + static_cast<int>(rng.below(5)), rng)
                            : wrb::random_measure(s, rng);
        const auto report = wrb::orbit(s, mu);
        REQUIRE(report.period.has_value());
        CHECK((*report.period == 1 || *report.period == 2));
        CHECK(wrb::variance_sequence(report).decrease_violations.empty());
    }
}

TEST_CASE("convex test functions do not increase in expectation", "[dynamics]") {
    const auto s = wrb::build_interval(101);

    std::vector<double> constant(101, 0.5);
    CHECK(wrb::jensen_check(s, s.m, constant));

    std::vector<double> quad(101);
    for (int k = 0; k < 101; ++k) {
        const double x = s.coords[k][0] - 0.5;
        quad[k] = x * x;
    }
    const auto B = wrb::canonical_barycenter(s, s.m).B;
    CHECK(B.weights[50] == 1.0);
    CHECK(wrb::jensen_check(s, s.m, quad));

    wrb::SplitMix64 rng(4242ull);
    for (int t = 0; t < 15; ++t) {
        const auto phi = wrb::random_convex_table(101, rng);
        const auto mu = wrb::random_measure(s, rng);
        CHECK(wrb::jensen_check(s, mu, phi));
    }
}

TEST_CASE("jensen check rejects unusable inputs", "[dynamics]") {
    const auto s = wrb::build_interval(5);
    CHECK_THROWS_AS(wrb::jensen_check(s, s.m, {0.0, 1.0, 0.0, 0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(wrb::jensen_check(s, s.m, {0.0, 1.0}),
                    std::invalid_argument);

    const auto circle = wrb::build_circle(5);
    CHECK_THROWS_AS(wrb::jensen_check(circle, circle.m, {0, 0, 0, 0, 0}),
                    std::invalid_argument);

    wrb::SplitMix64 rng(1ull);
    const auto graph = wrb::random_graph_space(5, 2, rng);
    CHECK_THROWS_AS(wrb::jensen_check(graph, graph.m, {0, 0, 0, 0, 0}),
                    std::invalid_argument);
}

TEST_CASE("barycenter mass only sits on barycenter points", "[dynamics]") {
    const auto sphere = wrb::build_sphere_grid(5, 8);
    const auto tol = wrb::Tolerances::for_space(sphere);
    CHECK(wrb::martingale_check(sphere, wrb::uniform_on(sphere, {0, 1}), tol.tol_b));
    CHECK(wrb::martingale_check(sphere, wrb::dirac(sphere, 9), tol.tol_b));

    wrb::SplitMix64 rng(909ull);
    for (int t = 0; t < 10; ++t) {
        const auto s = wrb::random_graph_space(
            5 + static_cast<int>(rng.below(15)), static_cast<int>(rng.below(20)),
            rng);
        const auto gtol = wrb::Tolerances::for_space(s);
        CHECK(wrb::martingale_check(s, wrb::random_measure(s, rng), gtol.tol_b));
    }
}

TEST_CASE("equal barycenter supports force equal barycenters", "[dynamics]") {
    const auto s = wrb::build_circle(12);
    const auto mu = wrb::uniform_on(s, {0, 4, 8});
    CHECK(wrb::support_determines_check(s, mu, mu));

    wrb::Measure skew;
    skew.weights.assign(12, 0.0);
    skew.weights[0] = 0.5;
    skew.weights[4] = 0.25;
    skew.weights[8] = 0.25;
    CHECK(wrb::support_determines_check(s, mu, skew));

    wrb::SplitMix64 rng(55ull);
    const auto g = wrb::random_graph_space(20, 15, rng);
    std::vector<wrb::Measure> pool;
    for (int t = 0; t < 12; ++t) pool.push_back(wrb::random_measure(g, rng));
    for (std::size_t a = 0; a < pool.size(); ++a)
        for (std::size_t b = a; b < pool.size(); ++b)
            CHECK(wrb::support_determines_check(g, pool[a], pool[b]));
}

TEST_CASE("variance sequence flags a fabricated increase", "[dynamics]") {
    wrb::OrbitReport fake;
    const auto s = wrb::build_circle(4);
    fake.iterates = {wrb::dirac(s, 0), wrb::dirac(s, 1), wrb::dirac(s, 2)};
    fake.variances = {0.1, 0.3, 0.05};
    const auto check = wrb::variance_sequence(fake);
    REQUIRE(check.decrease_violations.size() == 1);
    CHECK(check.decrease_violations[0] == 0);
    CHECK_FALSE(check.ok());
}
