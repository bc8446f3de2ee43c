#pragma once

// The discrete dynamical system mu -> B(mu): orbit and cycle detection,
// variance monotonicity along orbits, convex-order (Jensen) checks on
// interval spaces, the martingale property, and support-determines-B.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wrb/barycenter.hpp"
#include "wrb/ot.hpp"
#include "wrb/space.hpp"

namespace wrb {

struct OrbitReport {
    std::vector<Measure> iterates;    // mu, B(mu), B^2(mu), ...
    std::optional<int> period;        // index gap of the first W2 match
    int entry_index = -1;             // earlier index of the matched pair
    std::vector<double> variances;    // per iterate
    std::vector<double> w2_to_prev;   // per iterate, 0 for the first
};

// Iterates B until some iterate is within match_tol (in W2) of an earlier
// one, comparing against all previous iterates so pre-periodic tails are
// handled, or until max_iter new iterates have been produced.
inline OrbitReport orbit(const MetricMeasureSpace& space, const Measure& mu0,
                         int max_iter, double match_tol, const Tolerances& tol) {
    if (!(match_tol > 0.0))
        throw std::invalid_argument("orbit: match_tol must be positive");
    if (max_iter < 0) throw std::invalid_argument("orbit: max_iter must be >= 0");
    require_valid_measure(space, mu0);

    OrbitReport report;
    report.iterates.push_back(mu0);
    report.variances.push_back(variance(space, mu0, tol.tol_b).value);
    report.w2_to_prev.push_back(0.0);
    for (int k = 1; k <= max_iter; ++k) {
        Measure next =
            canonical_barycenter(space, report.iterates.back(), tol).B;
        double to_prev = 0.0;
        int match = -1;
        for (int j = 0; j < static_cast<int>(report.iterates.size()); ++j) {
            const double d = w2(space, next, report.iterates[j]);
            if (j == k - 1) to_prev = d;
            if (match < 0 && d <= match_tol) match = j;
        }
        report.iterates.push_back(std::move(next));
        report.variances.push_back(
            variance(space, report.iterates.back(), tol.tol_b).value);
        report.w2_to_prev.push_back(to_prev);
        if (match >= 0) {
            report.period = k - match;
            report.entry_index = match;
            break;
        }
    }
    return report;
}

inline OrbitReport orbit(const MetricMeasureSpace& space, const Measure& mu0,
                         int max_iter = 50) {
    const Tolerances tol = Tolerances::for_space(space);
    return orbit(space, mu0, max_iter, tol.match_tol, tol);
}

// True iff <phi, B(mu)> <= <phi, mu> + 1e-9 for a discretely convex phi on a
// space with sorted 1-D coordinates (geodesic order). Convexity means the
// slopes of consecutive table entries are nondecreasing.
inline bool jensen_check(const MetricMeasureSpace& space, const Measure& mu,
                         const std::vector<double>& phi) {
    if (static_cast<int>(phi.size()) != space.n)
        throw std::invalid_argument("jensen_check: phi size mismatch");
    if (space.coords.empty() || space.coords.size() != static_cast<std::size_t>(space.n))
        throw std::invalid_argument("jensen_check: space has no coordinates");
    for (const auto& c : space.coords)
        if (c.size() != 1)
            throw std::invalid_argument(
                "jensen_check: geodesic order requires 1-D coordinates");
    for (int k = 0; k + 1 < space.n; ++k)
        if (!(space.coords[k + 1][0] > space.coords[k][0]))
            throw std::invalid_argument(
                "jensen_check: coordinates must be strictly increasing");

    double prev_slope = -std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < space.n; ++k) {
        const double slope = (phi[k + 1] - phi[k]) /
                             (space.coords[k + 1][0] - space.coords[k][0]);
        if (slope < prev_slope - 1e-9 * (1.0 + std::abs(prev_slope)))
            throw std::invalid_argument("jensen_check: phi is not convex");
        prev_slope = std::max(prev_slope, slope);
    }

    const Measure B = canonical_barycenter(space, mu).B;
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < space.n; ++i) {
        lhs += phi[i] * B.weights[i];
        rhs += phi[i] * mu.weights[i];
    }
    return lhs <= rhs + 1e-9;
}

// True iff every atom of B(mu) lies in the barycenter set of mu, i.e. the
// product coupling B(mu) x mu conditions each point on a measure it is a
// barycenter of.
inline bool martingale_check(const MetricMeasureSpace& space, const Measure& mu,
                             double tol_b) {
    Tolerances tol = Tolerances::for_space(space);
    tol.tol_b = tol_b;
    const BarycenterResult res = canonical_barycenter(space, mu, tol);
    std::vector<char> in_b(static_cast<std::size_t>(space.n), 0);
    for (int y : res.b_set) in_b[y] = 1;
    for (int y = 0; y < space.n; ++y)
        if (res.B.weights[y] > 0.0 && !in_b[y]) return false;
    return true;
}

// Implication check: equal supports of B(mu) and B(nu) at threshold tau must
// force w2(B(mu), B(nu)) <= 1e-9. Vacuously true when the supports differ.
// The discrete restatement needs a full-support reference measure.
inline bool support_determines_check(const MetricMeasureSpace& space,
                                     const Measure& mu, const Measure& nu,
                                     double tau = 0.0) {
    const Measure Bmu = canonical_barycenter(space, mu).B;
    const Measure Bnu = canonical_barycenter(space, nu).B;
    if (Bmu.support(tau) != Bnu.support(tau)) return true;
    return w2(space, Bmu, Bnu) <= 1e-9;
}

struct VarianceCheck {
    std::vector<int> decrease_violations; // k with var[k+1] > var[k] + 1e-9
    std::vector<int> support_violations;  // equality step k where
                                          // supp(mu_k) is not in supp(mu_{k+2})
    bool ok() const {
        return decrease_violations.empty() && support_violations.empty();
    }
};

// Checks the variance sequence of an orbit: nonincreasing within 1e-9, and
// whenever two consecutive variances agree within 1e-9 the equality case
// supp(mu_k) subset of supp(mu_{k+2}) must hold. The support clause is only
// meaningful on exact-tie fixtures; random callers assert decrease only.
inline VarianceCheck variance_sequence(const OrbitReport& report) {
    VarianceCheck check;
    const auto& v = report.variances;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        if (v[k + 1] > v[k] + 1e-9)
            check.decrease_violations.push_back(static_cast<int>(k));
        else if (std::abs(v[k + 1] - v[k]) <= 1e-9 &&
                 k + 2 < report.iterates.size()) {
            const auto sup_k = report.iterates[k].support(0.0);
            const auto sup_k2 = report.iterates[k + 2].support(0.0);
            if (!std::includes(sup_k2.begin(), sup_k2.end(), sup_k.begin(),
                               sup_k.end()))
                check.support_violations.push_back(static_cast<int>(k));
        }
    }
    return check;
}

}  // namespace wrb
