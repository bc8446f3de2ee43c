#pragma once

// Barycentric cost, the argmin set b(mu), the canonical barycenter B(mu)
// (nearest-point push of the reference measure onto b(mu)), the regularized
// functional F_eps and its closed-form minimizer, and the eps -> 0 sweep.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wrb/ot.hpp"
#include "wrb/space.hpp"

namespace wrb {

struct BarycenterResult {
    std::vector<int> b_set;                   // argmin set of the barycentric cost
    Measure B;                                // canonical barycenter
    std::vector<std::vector<int>> assignment; // tied nearest b_set points per source
                                              // (empty row when m[i] = 0)
    double d0 = 0.0;                          // min of the barycentric cost
};

struct EpsilonStep {
    double eps;
    Measure mu_eps;
    double f_value; // F_eps(mu_eps)
    double gap;     // w2(mu_eps, B(mu))
};

struct EpsilonPath {
    std::vector<EpsilonStep> steps;
    bool converged = false; // final gap <= gap_tol
};

inline std::vector<double> barycentric_cost(const MetricMeasureSpace& space,
                                            const Measure& mu) {
    require_valid_measure(space, mu);
    std::vector<double> c(space.n, 0.0);
    for (int y = 0; y < space.n; ++y) {
        double acc = 0.0;
        for (int x = 0; x < space.n; ++x) acc += mu.weights[x] * space.d2(x, y);
        c[y] = acc;
    }
    return c;
}

inline std::vector<int> barycenter_set(const MetricMeasureSpace& space,
                                       const Measure& mu, double tol_b) {
    const std::vector<double> c = barycentric_cost(space, mu);
    const double d0 = *std::min_element(c.begin(), c.end());
    std::vector<int> out;
    for (int y = 0; y < space.n; ++y)
        if (c[y] <= d0 + tol_b) out.push_back(y);
    return out;
}

// For every source point, the set of targets within tol_tie of its nearest
// target. Tolerance ties are kept so symmetric inputs split symmetrically.
inline std::vector<std::vector<int>> nearest_projection(
    const MetricMeasureSpace& space, const std::vector<int>& targets,
    double tol_tie) {
    if (targets.empty())
        throw std::invalid_argument("nearest_projection: empty target set");
    std::vector<std::vector<int>> out(static_cast<std::size_t>(space.n));
    for (int i = 0; i < space.n; ++i) {
        double dmin = std::numeric_limits<double>::infinity();
        for (int y : targets) dmin = std::min(dmin, space.dist[i][y]);
        for (int y : targets)
            if (space.dist[i][y] <= dmin + tol_tie) out[i].push_back(y);
    }
    return out;
}

namespace detail {

// Push mass[i] to targets[i] with uniform splitting. Per-target addends are
// summed in ascending order and the result is renormalized, so symmetric
// inputs yield bit-identical symmetric weights.
inline Measure push_to_targets(int n, const std::vector<double>& mass,
                               const std::vector<std::vector<int>>& targets) {
    std::vector<std::vector<double>> addends(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (mass[i] <= 0.0) continue;
        const double share = mass[i] / static_cast<double>(targets[i].size());
        for (int y : targets[i]) addends[y].push_back(share);
    }
    Measure out;
    out.weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int y = 0; y < n; ++y) {
        std::sort(addends[y].begin(), addends[y].end());
        double acc = 0.0;
        for (double a : addends[y]) acc += a;
        out.weights[y] = acc;
    }
    normalize(out.weights);
    return out;
}

}  // namespace detail

inline BarycenterResult canonical_barycenter(const MetricMeasureSpace& space,
                                             const Measure& mu, double tol_b,
                                             double tol_tie) {
    require_valid_measure(space, mu);
    const std::vector<double> c = barycentric_cost(space, mu);
    BarycenterResult res;
    res.d0 = *std::min_element(c.begin(), c.end());
    for (int y = 0; y < space.n; ++y)
        if (c[y] <= res.d0 + tol_b) res.b_set.push_back(y);

    const auto nearest = nearest_projection(space, res.b_set, tol_tie);
    res.assignment.assign(static_cast<std::size_t>(space.n), {});
    for (int i = 0; i < space.n; ++i)
        if (space.m.weights[i] > 0.0) res.assignment[i] = nearest[i];
    res.B = detail::push_to_targets(space.n, space.m.weights, res.assignment);
    return res;
}

inline BarycenterResult canonical_barycenter(const MetricMeasureSpace& space,
                                             const Measure& mu,
                                             const Tolerances& tol) {
    return canonical_barycenter(space, mu, tol.tol_b, tol.tol_tie);
}

inline BarycenterResult canonical_barycenter(const MetricMeasureSpace& space,
                                             const Measure& mu) {
    return canonical_barycenter(space, mu, Tolerances::for_space(space));
}

// Minimizer of F_eps(nu) = <c_mu, nu> + eps * W2^2(m, nu). Joint minimization
// over couplings with source marginal m decouples: atom i goes to
// argmin_y [ c(y) + eps * d(i,y)^2 ], ties split uniformly.
//
// With snap = true, c values within tol_b of the minimum are first snapped to
// the minimum, and per-atom ties are taken within a window that reproduces the
// tol_tie nearest-point rule of canonical_barycenter; the eps-path then
// targets the tolerance-based b(mu). With snap = false the raw values are
// used and only exact ties split.
inline Measure minimize_f_epsilon(const MetricMeasureSpace& space,
                                  const Measure& mu, double eps, bool snap,
                                  const Tolerances& tol) {
    if (!(eps > 0.0))
        throw std::invalid_argument("minimize_f_epsilon: eps must be positive");
    require_valid_measure(space, mu);
    std::vector<double> c = barycentric_cost(space, mu);
    const double d0 = *std::min_element(c.begin(), c.end());
    if (snap)
        for (double& v : c)
            if (v <= d0 + tol.tol_b) v = d0;

    std::vector<std::vector<int>> targets(static_cast<std::size_t>(space.n));
    for (int i = 0; i < space.n; ++i) {
        if (space.m.weights[i] <= 0.0) continue;
        double vmin = std::numeric_limits<double>::infinity();
        int ymin = -1;
        for (int y = 0; y < space.n; ++y) {
            const double v = c[y] + eps * space.d2(i, y);
            if (v < vmin) {
                vmin = v;
                ymin = y;
            }
        }
        double window = 0.0;
        if (snap) {
            const double dmin = space.dist[i][ymin];
            window = eps * tol.tol_tie * (2.0 * dmin + tol.tol_tie);
        }
        for (int y = 0; y < space.n; ++y) {
            const double v = c[y] + eps * space.d2(i, y);
            if (v <= vmin + window) targets[i].push_back(y);
        }
    }
    return detail::push_to_targets(space.n, space.m.weights, targets);
}

inline Measure minimize_f_epsilon(const MetricMeasureSpace& space,
                                  const Measure& mu, double eps, bool snap) {
    return minimize_f_epsilon(space, mu, eps, snap, Tolerances::for_space(space));
}

inline double f_epsilon_value(const MetricMeasureSpace& space, const Measure& mu,
                              const Measure& nu, double eps) {
    if (eps < 0.0)
        throw std::invalid_argument("f_epsilon_value: eps must be nonnegative");
    const std::vector<double> c = barycentric_cost(space, mu);
    require_valid_measure(space, nu);
    double linear = 0.0;
    for (int y = 0; y < space.n; ++y) linear += c[y] * nu.weights[y];
    if (eps == 0.0) return linear;
    return linear + eps * solve_ot(space, space.m, nu).cost;
}

// Largest eps below which the snapped per-atom argmins provably coincide with
// the nearest-point assignment onto b(mu): for each reference atom i and each
// target y outside b(mu) that is closer to i than its nearest b(mu) point,
// the preference flips at (c(y) - d0) / (q_i - d(i,y)^2); the tie window is
// absorbed into the denominator so the bound is conservative. Returns +inf
// when no flip can occur.
inline double flip_threshold(const MetricMeasureSpace& space, const Measure& mu,
                             const Tolerances& tol) {
    require_valid_measure(space, mu);
    const std::vector<double> c = barycentric_cost(space, mu);
    const double d0 = *std::min_element(c.begin(), c.end());
    std::vector<char> in_b(static_cast<std::size_t>(space.n), 0);
    for (int y = 0; y < space.n; ++y)
        if (c[y] <= d0 + tol.tol_b) in_b[y] = 1;
    const double window =
        tol.tol_tie * (2.0 * space.diameter() + tol.tol_tie);
    double eps_star = std::numeric_limits<double>::infinity();
    for (int i = 0; i < space.n; ++i) {
        if (space.m.weights[i] <= 0.0) continue;
        double qi = std::numeric_limits<double>::infinity();
        for (int y = 0; y < space.n; ++y)
            if (in_b[y]) qi = std::min(qi, space.d2(i, y));
        for (int y = 0; y < space.n; ++y) {
            if (in_b[y]) continue;
            const double denom = qi - space.d2(i, y) + window;
            if (denom <= 0.0) continue;
            eps_star = std::min(eps_star, (c[y] - d0) / denom);
        }
    }
    return eps_star;
}

inline double flip_threshold(const MetricMeasureSpace& space, const Measure& mu) {
    return flip_threshold(space, mu, Tolerances::for_space(space));
}

inline EpsilonPath epsilon_sweep(const MetricMeasureSpace& space,
                                 const Measure& mu, double eps0, double ratio,
                                 int max_steps, double gap_tol,
                                 const Tolerances& tol, bool snap = true) {
    if (!(eps0 > 0.0))
        throw std::invalid_argument("epsilon_sweep: eps0 must be positive");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("epsilon_sweep: ratio must be in (0, 1)");
    if (max_steps < 1)
        throw std::invalid_argument("epsilon_sweep: max_steps must be positive");

    const BarycenterResult bary = canonical_barycenter(space, mu, tol);
    EpsilonPath path;
    double eps = eps0;
    for (int k = 0; k < max_steps; ++k) {
        EpsilonStep step;
        step.eps = eps;
        step.mu_eps = minimize_f_epsilon(space, mu, eps, snap, tol);
        step.f_value = f_epsilon_value(space, mu, step.mu_eps, eps);
        step.gap = w2(space, step.mu_eps, bary.B);
        path.steps.push_back(std::move(step));
        if (path.steps.back().gap <= gap_tol) {
            path.converged = true;
            break;
        }
        eps *= ratio;
    }
    return path;
}

inline EpsilonPath epsilon_sweep(const MetricMeasureSpace& space,
                                 const Measure& mu, double eps0 = 1.0,
                                 double ratio = 0.5, int max_steps = 200,
                                 double gap_tol = 1e-10) {
    return epsilon_sweep(space, mu, eps0, ratio, max_steps, gap_tol,
                         Tolerances::for_space(space));
}

}  // namespace wrb
