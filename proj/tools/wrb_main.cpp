// wrb: canonical Wasserstein-regularized barycenters on finite metric
// measure spaces. Builds spaces, computes B(mu), runs epsilon sweeps and
// orbits, evaluates W2 and variance, and runs the seeded property suite.
//
// Exit codes: 0 ok, 2 invalid argument, 3 validation failure,
// 4 convergence failure, 5 theory violation (orbit period > 2),
// 6 property-suite failure.

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wrb/wrb.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidArgument = 2;
constexpr int kExitValidationFailure = 3;
constexpr int kExitConvergenceFailure = 4;
constexpr int kExitTheoryViolation = 5;
constexpr int kExitPropertyFailure = 6;

struct ToleranceFlags {
    std::optional<double> tol_b, tol_tie, tol_metric, gap_tol, match_tol;

    wrb::Tolerances resolve(const wrb::MetricMeasureSpace& space) const {
        wrb::Tolerances t = wrb::Tolerances::for_space(space);
        if (tol_b) t.tol_b = *tol_b;
        if (tol_tie) t.tol_tie = *tol_tie;
        if (tol_metric) t.tol_metric = *tol_metric;
        if (gap_tol) t.gap_tol = *gap_tol;
        if (match_tol) t.match_tol = *match_tol;
        return t;
    }
};

void add_tolerance_flags(CLI::App* cmd, ToleranceFlags& flags) {
    cmd->add_option("--tol-b", flags.tol_b,
                    "barycenter-set membership tolerance (squared length)");
    cmd->add_option("--tol-tie", flags.tol_tie,
                    "nearest-point tie tolerance (length)");
    cmd->add_option("--tol-metric", flags.tol_metric,
                    "triangle-inequality tolerance (length)");
    cmd->add_option("--gap-tol", flags.gap_tol,
                    "epsilon-sweep convergence threshold");
    cmd->add_option("--match-tol", flags.match_tol,
                    "orbit cycle matching threshold (length)");
}

int report_space(const wrb::MetricMeasureSpace& space, const std::string& out,
                 const ToleranceFlags& flags) {
    const wrb::Tolerances tol = flags.resolve(space);
    const wrb::ValidationReport rep =
        wrb::validate(space, tol.tol_metric, tol.tol_mass);
    if (!rep.ok()) {
        std::cout << "invalid space (" << rep.violations.size() << " violations)\n";
        for (const auto& v : rep.violations) std::cout << "  " << v.describe() << '\n';
        return kExitValidationFailure;
    }
    std::cout << "valid space: n=" << space.n
              << " diameter=" << wrb::fmt17(space.diameter()) << '\n';
    if (!out.empty()) {
        wrb::write_space(out, space);
        std::cout << "wrote " << out << '\n';
    }
    return kExitOk;
}

wrb::MetricMeasureSpace read_graph_file(const std::string& path) {
    const nlohmann::json j = wrb::detail::load_json(path);
    if (!j.contains("n") || !j.contains("edges"))
        throw std::invalid_argument(path + ": graph file needs 'n' and 'edges'");
    const int n = j["n"].get<int>();
    std::vector<wrb::Edge> edges;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument(path + ": edge must be [i, j, length]");
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    std::vector<double> m;
    if (j.contains("m"))
        for (const auto& w : j["m"]) m.push_back(w.get<double>());
    return wrb::build_graph(edges, n, m);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"canonical Wasserstein-regularized barycenters on finite "
                 "metric measure spaces"};
    app.require_subcommand(1);
    std::function<int()> action;

    // space circle|sphere|interval|graph
    auto* space_cmd = app.add_subcommand("space", "build and validate a space");
    space_cmd->require_subcommand(1);
    static ToleranceFlags space_flags;
    {
        auto* circle = space_cmd->add_subcommand("circle", "M points on the unit circle");
        static int M = 0;
        static std::string out;
        circle->add_option("--m", M, "point count (>= 3)")->required();
        circle->add_option("--out", out, "space JSON output path");
        add_tolerance_flags(circle, space_flags);
        circle->callback([&] {
            action = [] { return report_space(wrb::build_circle(M), out, space_flags); };
        });
    }
    {
        auto* sphere = space_cmd->add_subcommand("sphere", "lat-long grid on the unit sphere");
        static int lat = 0, lon = 0;
        static std::string out;
        sphere->add_option("--lat", lat, "interior latitude rings (>= 1)")->required();
        sphere->add_option("--lon", lon, "points per ring (>= 3)")->required();
        sphere->add_option("--out", out, "space JSON output path");
        add_tolerance_flags(sphere, space_flags);
        sphere->callback([&] {
            action = [] {
                return report_space(wrb::build_sphere_grid(lat, lon), out, space_flags);
            };
        });
    }
    {
        auto* interval = space_cmd->add_subcommand("interval", "M points on [0, 1]");
        static int M = 0;
        static std::string out;
        interval->add_option("--m", M, "point count (>= 2)")->required();
        interval->add_option("--out", out, "space JSON output path");
        add_tolerance_flags(interval, space_flags);
        interval->callback([&] {
            action = [] { return report_space(wrb::build_interval(M), out, space_flags); };
        });
    }
    {
        auto* graph = space_cmd->add_subcommand("graph", "shortest-path metric of a graph");
        static std::string edges, out;
        graph->add_option("--edges", edges, "JSON file with n, edges, optional m")
            ->required();
        graph->add_option("--out", out, "space JSON output path");
        add_tolerance_flags(graph, space_flags);
        graph->callback([&] {
            action = [] { return report_space(read_graph_file(edges), out, space_flags); };
        });
    }

    {
        auto* bary = app.add_subcommand("barycenter", "compute the canonical barycenter B(mu)");
        static std::string space_path, measure_path, out;
        static ToleranceFlags flags;
        bary->add_option("--space", space_path, "space JSON")->required();
        bary->add_option("--measure", measure_path, "measure JSON")->required();
        bary->add_option("--out", out, "BarycenterResult JSON output path");
        add_tolerance_flags(bary, flags);
        bary->callback([&] {
            action = [] {
                const wrb::MetricMeasureSpace space = wrb::read_space(space_path);
                const wrb::Measure mu = wrb::read_measure(measure_path, space.n);
                const wrb::Tolerances tol = flags.resolve(space);
                const wrb::BarycenterResult res =
                    wrb::canonical_barycenter(space, mu, tol);
                std::cout << "b_set_size=" << res.b_set.size() << '\n'
                          << "supp_B_size=" << res.B.support(0.0).size() << '\n'
                          << "d0=" << wrb::fmt17(res.d0) << '\n'
                          << "var_mu="
                          << wrb::fmt17(wrb::variance(space, mu, tol.tol_b).value)
                          << '\n'
                          << "var_B="
                          << wrb::fmt17(wrb::variance(space, res.B, tol.tol_b).value)
                          << '\n';
                if (!out.empty()) wrb::write_barycenter_result(out, res);
                return kExitOk;
            };
        });
    }

    {
        auto* sweep = app.add_subcommand("sweep", "geometric epsilon sweep toward B(mu)");
        static std::string space_path, measure_path, out;
        static double eps0 = 1.0, ratio = 0.5;
        static int max_steps = 200;
        static bool no_snap = false;
        static ToleranceFlags flags;
        sweep->add_option("--space", space_path, "space JSON")->required();
        sweep->add_option("--measure", measure_path, "measure JSON")->required();
        sweep->add_option("--out", out, "EpsilonPath CSV output path");
        sweep->add_option("--eps0", eps0, "initial epsilon (default 1)");
        sweep->add_option("--ratio", ratio, "geometric ratio in (0, 1), default 0.5");
        sweep->add_option("--max-steps", max_steps, "step budget (default 200)");
        sweep->add_flag("--no-snap", no_snap,
                        "use raw barycentric costs (no snap-to-min)");
        add_tolerance_flags(sweep, flags);
        sweep->callback([&] {
            action = [] {
                const wrb::MetricMeasureSpace space = wrb::read_space(space_path);
                const wrb::Measure mu = wrb::read_measure(measure_path, space.n);
                const wrb::Tolerances tol = flags.resolve(space);
                const wrb::EpsilonPath path =
                    wrb::epsilon_sweep(space, mu, eps0, ratio, max_steps,
                                       tol.gap_tol, tol, !no_snap);
                if (!out.empty()) wrb::write_epsilon_path_csv(out, path);
                const wrb::EpsilonStep& last = path.steps.back();
                std::cout << "steps=" << path.steps.size()
                          << " final_eps=" << wrb::fmt17(last.eps)
                          << " final_gap=" << wrb::fmt17(last.gap) << '\n';
                if (!path.converged) {
                    std::cout << "no convergence: gap stayed above "
                              << wrb::fmt17(tol.gap_tol) << '\n';
                    return kExitConvergenceFailure;
                }
                return kExitOk;
            };
        });
    }

    {
        auto* orbit_cmd = app.add_subcommand("orbit", "iterate mu -> B(mu) and detect cycles");
        static std::string space_path, measure_path, out, measures_out;
        static int max_iter = 50;
        static ToleranceFlags flags;
        orbit_cmd->add_option("--space", space_path, "space JSON")->required();
        orbit_cmd->add_option("--measure", measure_path, "measure JSON")->required();
        orbit_cmd->add_option("--out", out, "OrbitReport CSV output path");
        orbit_cmd->add_option("--measures-out", measures_out,
                              "JSON sidecar with full iterate measures");
        orbit_cmd->add_option("--max-iter", max_iter, "iteration budget (default 50)");
        add_tolerance_flags(orbit_cmd, flags);
        orbit_cmd->callback([&] {
            action = [] {
                const wrb::MetricMeasureSpace space = wrb::read_space(space_path);
                const wrb::Measure mu = wrb::read_measure(measure_path, space.n);
                const wrb::Tolerances tol = flags.resolve(space);
                const wrb::OrbitReport report =
                    wrb::orbit(space, mu, max_iter, tol.match_tol, tol);
                if (!out.empty()) wrb::write_orbit_csv(out, report);
                if (!measures_out.empty()) wrb::write_orbit_measures(measures_out, report);
                if (report.period) {
                    std::cout << "period=" << *report.period
                              << " entry=" << report.entry_index << '\n';
                    if (*report.period > 2) {
                        std::cout << "theory violation: period exceeds 2\n";
                        return kExitTheoryViolation;
                    }
                } else {
                    std::cout << "period=none (no cycle within " << max_iter
                              << " iterations)\n";
                }
                return kExitOk;
            };
        });
    }

    {
        auto* w2_cmd = app.add_subcommand("w2", "Wasserstein distance between two measures");
        static std::string space_path, a_path, b_path, plan_out;
        w2_cmd->add_option("--space", space_path, "space JSON")->required();
        w2_cmd->add_option("--a", a_path, "first measure JSON")->required();
        w2_cmd->add_option("--b", b_path, "second measure JSON")->required();
        w2_cmd->add_option("--plan-out", plan_out, "optimal plan JSON output path");
        w2_cmd->callback([&] {
            action = [] {
                const wrb::MetricMeasureSpace space = wrb::read_space(space_path);
                const wrb::Measure a = wrb::read_measure(a_path, space.n);
                const wrb::Measure b = wrb::read_measure(b_path, space.n);
                const wrb::TransportPlan plan = wrb::solve_ot(space, a, b);
                std::cout << "w2=" << wrb::fmt17(std::sqrt(plan.cost)) << '\n';
                if (!plan_out.empty()) wrb::write_plan(plan_out, plan);
                return kExitOk;
            };
        });
    }

    {
        auto* var_cmd = app.add_subcommand("variance", "variance and its argmin set");
        static std::string space_path, measure_path;
        static ToleranceFlags flags;
        var_cmd->add_option("--space", space_path, "space JSON")->required();
        var_cmd->add_option("--measure", measure_path, "measure JSON")->required();
        add_tolerance_flags(var_cmd, flags);
        var_cmd->callback([&] {
            action = [] {
                const wrb::MetricMeasureSpace space = wrb::read_space(space_path);
                const wrb::Measure mu = wrb::read_measure(measure_path, space.n);
                const wrb::Tolerances tol = flags.resolve(space);
                const wrb::VarianceResult res = wrb::variance(space, mu, tol.tol_b);
                std::cout << "variance=" << wrb::fmt17(res.value) << '\n' << "argmin=[";
                for (std::size_t t = 0; t < res.argmin_set.size(); ++t)
                    std::cout << (t ? "," : "") << res.argmin_set[t];
                std::cout << "]\n";
                return kExitOk;
            };
        });
    }

    {
        auto* check = app.add_subcommand("check", "run the seeded property suite");
        static std::uint64_t seed = 0;
        static int trials = 100;
        static std::string space_path;
        check->add_option("--seed", seed, "RNG seed (required, no wall-clock default)")
            ->required();
        check->add_option("--trials", trials, "trials per property (default 100)");
        check->add_option("--space", space_path,
                          "extra space JSON to include in the metric-axiom property");
        check->callback([&] {
            action = [] {
                std::vector<wrb::MetricMeasureSpace> extra;
                if (!space_path.empty())
                    extra.push_back(wrb::read_space(space_path, false));
                const wrb::PropertySuiteReport report =
                    wrb::run_property_suite(seed, trials, extra);
                for (const auto& r : report.results) {
                    if (r.pass())
                        std::cout << "PASS " << r.name << " (" << r.trials
                                  << " trials)\n";
                    else
                        std::cout << "FAIL " << r.name << " (" << r.failures << "/"
                                  << r.trials << "): " << r.detail << '\n';
                }
                if (!report.all_pass()) {
                    std::cout << "failing properties:";
                    for (const auto& name : report.failing_names())
                        std::cout << ' ' << name;
                    std::cout << '\n';
                    return kExitPropertyFailure;
                }
                return kExitOk;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidArgument;
    }

    try {
        return action();
    } catch (const wrb::disconnected_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidationFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidArgument;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidArgument;
    }
}
