#pragma once

// Seeded randomized property suite covering every module's invariants:
// metric axioms, OT certificates and oracles, W2 metric axioms, support
// sandwich, projection and F_eps optimality, eps-path stabilization, variance
// monotonicity, Jensen, martingale, support-determines-B, Dirac fixed points,
// and rotation equivariance. Bit-reproducible given (seed, trials).

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wrb/barycenter.hpp"
#include "wrb/dynamics.hpp"
#include "wrb/ot.hpp"
#include "wrb/rng.hpp"
#include "wrb/space.hpp"

namespace wrb {

struct PropertyResult {
    std::string name;
    int trials = 0;
    int failures = 0;
    std::string detail;  // first failure description, empty when passing

    bool pass() const { return failures == 0; }
};

struct PropertySuiteReport {
    std::vector<PropertyResult> results;

    bool all_pass() const {
        for (const PropertyResult& r : results)
            if (!r.pass()) return false;
        return true;
    }

    std::vector<std::string> failing_names() const {
        std::vector<std::string> out;
        for (const PropertyResult& r : results)
            if (!r.pass()) out.push_back(r.name);
        return out;
    }
};

namespace detail {

inline void record_failure(PropertyResult& r, const std::string& what) {
    ++r.failures;
    if (r.detail.empty()) r.detail = what;
}

inline std::vector<MetricMeasureSpace> graph_pool(SplitMix64& rng, int count,
                                                  int max_n, bool uniform_m) {
    std::vector<MetricMeasureSpace> pool;
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) {
        const int n = 5 + static_cast<int>(rng.below(
                              static_cast<std::uint64_t>(max_n - 4)));
        const int extra = static_cast<int>(rng.below(
            static_cast<std::uint64_t>(2 * n)));
        pool.push_back(random_graph_space(n, extra, rng, uniform_m));
    }
    return pool;
}

inline Measure rotate_circle_measure(const Measure& mu, int shift) {
    const int M = static_cast<int>(mu.size());
    Measure out;
    out.weights.assign(static_cast<std::size_t>(M), 0.0);
    for (int i = 0; i < M; ++i)
        out.weights[static_cast<std::size_t>((i + shift) % M)] = mu.weights[i];
    return out;
}

}  // namespace detail

// extra_spaces lets callers inject externally supplied spaces into the
// metric-axiom property (e.g. a file passed on the command line).
inline PropertySuiteReport run_property_suite(
    std::uint64_t seed, int trials,
    const std::vector<MetricMeasureSpace>& extra_spaces = {}) {
    if (trials < 1)
        throw std::invalid_argument("run_property_suite: trials must be >= 1");
    PropertySuiteReport report;

    {
        PropertyResult r{"metric-axioms"};
        SplitMix64 rng(seed ^ 0x01ull);
        std::vector<MetricMeasureSpace> spaces = {
            build_circle(12), build_sphere_grid(5, 8), build_interval(101)};
        auto pool = detail::graph_pool(rng, std::min(trials, 20), 40, true);
        for (auto& s : pool) spaces.push_back(std::move(s));
        for (const auto& s : spaces) {
            ++r.trials;
            const Tolerances tol = Tolerances::for_space(s);
            const ValidationReport rep = validate(s, tol.tol_metric, tol.tol_mass);
            if (!rep.ok())
                detail::record_failure(r, rep.violations.front().describe());
        }
        for (const auto& s : extra_spaces) {
            ++r.trials;
            const Tolerances tol = Tolerances::for_space(s);
            const ValidationReport rep = validate(s, tol.tol_metric, tol.tol_mass);
            if (!rep.ok())
                detail::record_failure(
                    r, "supplied space: " + rep.violations.front().describe());
        }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"ot-certificate"};
        SplitMix64 rng(seed ^ 0x02ull);
        const auto pool = detail::graph_pool(rng, 5, 30, true);
        for (int t = 0; t < trials; ++t) {
            ++r.trials;
            const auto& s = pool[t % pool.size()];
            const Tolerances tol = Tolerances::for_space(s);
            const Measure a = (t % 2 == 0)
                                  ? random_measure(s, rng)
                                  : random_sparse_measure(
                                        s, 1 + static_cast<int>(rng.below(4)), rng);
            const Measure b = random_measure(s, rng);
            const TransportPlan plan = solve_ot(s, a, b);
            if (!verify_certificate(s, plan, a, b, tol.tol_dual))
                detail::record_failure(r, "certificate rejected at trial " +
                                              std::to_string(t));
        }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"ot-oracle"};
        SplitMix64 rng(seed ^ 0x03ull);
        const auto pool = detail::graph_pool(rng, 5, 30, true);
        for (int t = 0; t < trials; ++t) {
            ++r.trials;
            const auto& s = pool[t % pool.size()];
            const int k = 1 + static_cast<int>(rng.below(
                                  std::min(std::uint64_t{6},
                                           static_cast<std::uint64_t>(s.n))));
            std::vector<int> avail(static_cast<std::size_t>(s.n));
            for (int i = 0; i < s.n; ++i) avail[static_cast<std::size_t>(i)] = i;
            auto draw = [&](int count) {
                std::vector<int> picked;
                std::vector<int> local = avail;
                for (int c = 0; c < count; ++c) {
                    const auto p = static_cast<std::size_t>(rng.below(local.size()));
                    picked.push_back(local[p]);
                    local.erase(local.begin() + static_cast<std::ptrdiff_t>(p));
                }
                return picked;
            };
            const std::vector<int> A = draw(k), B = draw(k);
            const double oracle = oracle_ot_uniform(s, A, B);
            const double solved = solve_ot(s, uniform_on(s, A), uniform_on(s, B)).cost;
            if (std::abs(solved - oracle) > 1e-9)
                detail::record_failure(
                    r, "solver/oracle mismatch " + std::to_string(solved - oracle));
        }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"w2-metric"};
        SplitMix64 rng(seed ^ 0x04ull);
        const auto pool = detail::graph_pool(rng, 5, 25, true);
        for (int t = 0; t < trials; ++t) {
            ++r.trials;
            const auto& s = pool[t % pool.size()];
            const Measure a = random_measure(s, rng);
            const Measure b = random_sparse_measure(
                s, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(s.n))),
                rng);
            const Measure c = random_measure(s, rng);
            const double ab = w2(s, a, b), ba = w2(s, b, a);
            if (std::abs(ab - ba) > 1e-10)
                detail::record_failure(r, "asymmetric w2");
            if (w2(s, a, c) > ab + w2(s, b, c) + 1e-9)
                detail::record_failure(r, "triangle inequality violated");
        }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"support-sandwich"};
        SplitMix64 rng(seed ^ 0x05ull);
        const auto pool = detail::graph_pool(rng, 5, 30, true);
        for (int t = 0; t < trials; ++t) {
            ++r.trials;
            const auto& s = pool[t % pool.size()];
            const Measure mu =
                (t % 2 == 0) ? random_measure(s, rng)
                             : random_sparse_measure(
                                   s, 1 + static_cast<int>(rng.below(5)), rng);
            const BarycenterResult res = canonical_barycenter(s, mu);
            std::vector<char> in_b(static_cast<std::size_t>(s.n), 0);
            for (int y : res.b_set) in_b[y] = 1;
            for (int y = 0; y < s.n; ++y)
                if (res.B.weights[y] > 0.0 && !in_b[y])
                    detail::record_failure(r, "supp B escapes b(mu)");
            for (int y : res.b_set)
                if (s.m.weights[y] > 0.0 && !(res.B.weights[y] > 0.0))
                    detail::record_failure(r, "supp(m) cap b(mu) not in supp B");
        }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"projection-optimality"};
        SplitMix64 rng(seed ^ 0x06ull);
        const auto pool = detail::graph_pool(rng, 5, 25, true);
        for (int t = 0; t < trials; ++t) {
            ++r.trials;
            const auto& s = pool[t % pool.size()];
            const Measure mu = random_measure(s, rng);
            const BarycenterResult res = canonical_barycenter(s, mu);
            const Measure nu = random_measure_on(s, res.b_set, rng);
            const double cb = solve_ot(s, s.m, res.B).cost;
            const double cn = solve_ot(s, s.m, nu).cost;
            if (cb > cn + 1e-9)
                detail::record_failure(r, "B is not the W2 projection of m");
        }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"f-eps-optimality"};
        SplitMix64 rng(seed ^ 0x07ull);
        const int space_count = std::max(1, trials / 20);
        const auto pool = detail::graph_pool(rng, space_count, 20, true);
        for (const auto& s : pool) {
            const Measure mu = random_measure(s, rng);
            for (const double eps : {1.0, 0.1, 0.01}) {
                const Measure best = minimize_f_epsilon(s, mu, eps, false);
                const double fbest = f_epsilon_value(s, mu, best, eps);
                for (int t = 0; t < 100; ++t) {
                    ++r.trials;
                    const Measure nu = random_measure(s, rng);
                    if (fbest > f_epsilon_value(s, mu, nu, eps) + 1e-9)
                        detail::record_failure(r, "F_eps minimizer beaten at eps=" +
                                                      std::to_string(eps));
                }
            }
        }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"eps-stabilization"};
        SplitMix64 rng(seed ^ 0x08ull);
        std::vector<MetricMeasureSpace> spaces = {build_circle(12)};
        auto pool = detail::graph_pool(rng, 3, 20, true);
        for (auto& s : pool) spaces.push_back(std::move(s));
        const int per_space = std::max(1, trials / 10);
        for (const auto& s : spaces) {
            const Tolerances tol = Tolerances::for_space(s);
            for (int t = 0; t < per_space; ++t) {
                ++r.trials;
                const Measure mu = random_sparse_measure(
                    s, 1 + static_cast<int>(rng.below(4)), rng);
                const BarycenterResult res = canonical_barycenter(s, mu, tol);
                double eps_star = flip_threshold(s, mu, tol);
                if (!std::isfinite(eps_star)) eps_star = 2e-6;
                for (const double eps : {eps_star / 2.0, eps_star / 8.0}) {
                    const Measure nu = minimize_f_epsilon(s, mu, eps, true, tol);
                    for (int y = 0; y < s.n; ++y)
                        if (nu.weights[y] != res.B.weights[y]) {
                            detail::record_failure(
                                r, "mu_eps differs from B below the flip threshold");
                            break;
                        }
                }
            }
        }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"variance-monotone"};
        SplitMix64 rng(seed ^ 0x09ull);
        const auto pool = detail::graph_pool(rng, 10, 40, true);
        for (int t = 0; t < trials; ++t) {
            ++r.trials;
            const auto& s = pool[t % pool.size()];
            const Tolerances tol = Tolerances::for_space(s);
            const Measure mu = random_measure(s, rng);
            const Measure B = canonical_barycenter(s, mu, tol).B;
            if (variance(s, B, tol.tol_b).value >
                variance(s, mu, tol.tol_b).value + 1e-9)
                detail::record_failure(r, "var(B(mu)) > var(mu)");
        }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"jensen"};
        SplitMix64 rng(seed ^ 0x0aull);
        const MetricMeasureSpace s = build_interval(101);
        for (int t = 0; t < trials; ++t) {
            ++r.trials;
            const std::vector<double> phi = random_convex_table(s.n, rng);
            const Measure mu = random_measure(s, rng);
            if (!jensen_check(s, mu, phi))
                detail::record_failure(r, "convex order violated");
        }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"martingale"};
        SplitMix64 rng(seed ^ 0x0bull);
        const auto pool = detail::graph_pool(rng, 5, 30, true);
        for (int t = 0; t < trials; ++t) {
            ++r.trials;
            const auto& s = pool[t % pool.size()];
            const Tolerances tol = Tolerances::for_space(s);
            const Measure mu =
                (t % 2 == 0) ? random_measure(s, rng)
                             : random_sparse_measure(
                                   s, 1 + static_cast<int>(rng.below(5)), rng);
            if (!martingale_check(s, mu, tol.tol_b))
                detail::record_failure(r, "atom of B outside b(mu)");
        }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"support-determines"};
        SplitMix64 rng(seed ^ 0x0cull);
        const MetricMeasureSpace s = random_graph_space(20, 15, rng, true);
        const int pool_size = std::min(trials, 30);
        std::vector<Measure> mus;
        for (int t = 0; t < pool_size; ++t)
            mus.push_back((t % 2 == 0)
                              ? random_measure(s, rng)
                              : random_sparse_measure(
                                    s, 1 + static_cast<int>(rng.below(5)), rng));
        for (std::size_t i = 0; i < mus.size(); ++i)
            for (std::size_t j = i + 1; j < mus.size(); ++j) {
                ++r.trials;
                if (!support_determines_check(s, mus[i], mus[j]))
                    detail::record_failure(r, "equal B-supports, different B");
            }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"dirac-fixed"};
        SplitMix64 rng(seed ^ 0x0dull);
        std::vector<MetricMeasureSpace> spaces = {build_circle(8),
                                                  build_interval(11)};
        auto pool = detail::graph_pool(rng, 2, 15, true);
        for (auto& s : pool) spaces.push_back(std::move(s));
        for (const auto& s : spaces)
            for (int i = 0; i < s.n; ++i) {
                ++r.trials;
                const Measure B = canonical_barycenter(s, dirac(s, i)).B;
                if (B.weights[i] != 1.0)
                    detail::record_failure(r, "B(dirac) is not the same dirac");
            }
        report.results.push_back(std::move(r));
    }

    {
        PropertyResult r{"rotation-equivariance"};
        SplitMix64 rng(seed ^ 0x0eull);
        const MetricMeasureSpace s = build_circle(12);
        const int count = std::min(trials, 20);
        for (int t = 0; t < count; ++t) {
            ++r.trials;
            const Measure mu = random_sparse_measure(
                s, 1 + static_cast<int>(rng.below(4)), rng);
            const int shift = 1 + static_cast<int>(rng.below(11));
            const Measure lhs =
                canonical_barycenter(s, detail::rotate_circle_measure(mu, shift)).B;
            const Measure rhs =
                detail::rotate_circle_measure(canonical_barycenter(s, mu).B, shift);
            for (int i = 0; i < s.n; ++i)
                if (lhs.weights[i] != rhs.weights[i]) {
                    detail::record_failure(r, "rotation does not commute with B");
                    break;
                }
        }
        report.results.push_back(std::move(r));
    }

    return report;
}

}  // namespace wrb
