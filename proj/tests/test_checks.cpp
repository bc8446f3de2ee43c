#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "wrb/checks.hpp"
#include "wrb/space.hpp"

TEST_CASE("property suite passes on builtin generators", "[checks]") {
    const auto report = wrb::run_property_suite(42ull, 20);
    const std::vector<std::string> expected = {
        "metric-axioms",      "ot-certificate",   "ot-oracle",
        "w2-metric",          "support-sandwich", "projection-optimality",
        "f-eps-optimality",   "eps-stabilization", "variance-monotone",
        "jensen",             "martingale",       "support-determines",
        "dirac-fixed",        "rotation-equivariance"};
    REQUIRE(report.results.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
        INFO(report.results[k].name << ": " << report.results[k].detail);
        CHECK(report.results[k].name == expected[k]);
        CHECK(report.results[k].failures == 0);
        CHECK(report.results[k].trials > 0);
    }
    CHECK(report.all_pass());
    CHECK(report.failing_names().empty());
}

TEST_CASE("property suite is deterministic in the seed", "[checks]") {
    const auto a = wrb::run_property_suite(7ull, 10);
    const auto b = wrb::run_property_suite(7ull, 10);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t k = 0; k < a.results.size(); ++k) {
        CHECK(a.results[k].trials == b.results[k].trials);
        CHECK(a.results[k].failures == b.results[k].failures);
        CHECK(a.results[k].detail == b.results[k].detail);
    }
}

TEST_CASE("property suite rejects a nonpositive trial count", "[checks]") {
    CHECK_THROWS_AS(wrb::run_property_suite(1ull, 0), std::invalid_argument);
    CHECK_THROWS_AS(wrb::run_property_suite(1ull, -5), std::invalid_argument);
}

TEST_CASE("an injected broken space fails the metric axioms", "[checks]") {
    wrb::MetricMeasureSpace bad;
    bad.n = 3;
    bad.dist = {{0.0, 1.0, 1.0}, {2.0, 0.0, 1.0}, {1.0, 1.0, 0.0}};
    bad.m.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

    const auto report = wrb::run_property_suite(42ull, 5, {bad});
    CHECK_FALSE(report.all_pass());
    const auto failing = report.failing_names();
    REQUIRE(std::find(failing.begin(), failing.end(), "metric-axioms") !=
            failing.end());
    CHECK(failing.size() == 1);
    const auto& metric = report.results.front();
    REQUIRE(metric.name == "metric-axioms");
    CHECK(metric.failures == 1);
    CHECK(metric.detail.find("supplied space") != std::string::npos);
    CHECK(metric.detail.find("asymmetric") != std::string::npos);
}
