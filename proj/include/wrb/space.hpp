#pragma once

// Finite metric measure spaces: a point set with a dense distance table and a
// reference probability measure. All downstream solvers treat these as
// immutable value types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace wrb {

struct Measure {
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }

    double total_mass() const {
        return std::accumulate(weights.begin(), weights.end(), 0.0);
    }

    // support(tau) = { i : w_i > tau }, monotone decreasing in tau.
    std::vector<int> support(double tau = 0.0) const {
        std::vector<int> s;
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (weights[i] > tau) s.push_back(static_cast<int>(i));
        return s;
    }
};

struct MetricMeasureSpace {
    int n = 0;
    std::vector<std::string> labels;             // optional, size n or empty
    std::vector<std::vector<double>> coords;     // optional, size n or empty
    std::vector<std::vector<double>> dist;       // n x n
    Measure m;                                   // reference measure, size n

    double diameter() const {
        double d = 0.0;
        for (const auto& row : dist)
            for (double v : row) d = std::max(d, v);
        return d;
    }

    double d(int i, int j) const { return dist[i][j]; }
    double d2(int i, int j) const { return dist[i][j] * dist[i][j]; }
};

// Default tolerances, scaled to the space per the library's conventions.
struct Tolerances {
    double tol_metric;   // triangle-inequality slack, length units
    double tol_mass;     // probability normalization slack
    double tol_b;        // barycenter-set membership slack, squared length
    double tol_tie;      // nearest-point tie slack, length units
    double tol_dual;     // LP certificate slack, squared length
    double gap_tol;      // epsilon-sweep convergence threshold
    double match_tol;    // orbit cycle matching threshold, length units

    static Tolerances for_space(const MetricMeasureSpace& space) {
        const double diam = space.diameter();
        Tolerances t;
        t.tol_metric = 1e-9 * diam;
        t.tol_mass = 1e-12;
        t.tol_b = 1e-9 * diam * diam;
        t.tol_tie = 1e-9 * diam;
        t.tol_dual = 1e-9 * diam * diam;
        t.gap_tol = 1e-10;
        t.match_tol = 1e-8 * diam;
        return t;
    }
};

inline double default_tol_mass() { return 1e-12; }

// Thrown when an edge list does not connect all vertices, so no finite
// metric exists.
class disconnected_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Violation {
    enum class Kind {
        nonzero_diagonal,
        negative_distance,
        asymmetry,
        triangle,
        negative_weight,
        mass_normalization,
    };
    Kind kind;
    int i = -1, j = -1, k = -1;
    double magnitude = 0.0;

    std::string describe() const {
        switch (kind) {
            case Kind::nonzero_diagonal:
                return "dist[" + std::to_string(i) + "][" + std::to_string(i) +
                       "] != 0 (|.| = " + std::to_string(magnitude) + ")";
            case Kind::negative_distance:
                return "dist[" + std::to_string(i) + "][" + std::to_string(j) +
                       "] < 0";
            case Kind::asymmetry:
                return "dist asymmetric at (" + std::to_string(i) + "," +
                       std::to_string(j) + "), |diff| = " + std::to_string(magnitude);
            case Kind::triangle:
                return "triangle inequality violated at (" + std::to_string(i) +
                       "," + std::to_string(j) + "," + std::to_string(k) +
                       "), excess = " + std::to_string(magnitude);
            case Kind::negative_weight:
                return "m[" + std::to_string(i) + "] < 0";
            case Kind::mass_normalization:
                return "sum(m) deviates from 1 by " + std::to_string(magnitude);
        }
        return "unknown";
    }
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Report-only check of the metric-measure invariants. An empty report means
// the space is valid at the given tolerances.
inline ValidationReport validate(const MetricMeasureSpace& space,
                                 double tol_metric, double tol_mass) {
    ValidationReport rep;
    const int n = space.n;
    for (int i = 0; i < n; ++i) {
        if (space.dist[i][i] != 0.0)
            rep.violations.push_back({Violation::Kind::nonzero_diagonal, i, i, -1,
                                      std::abs(space.dist[i][i])});
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (space.dist[i][j] < 0.0)
                rep.violations.push_back({Violation::Kind::negative_distance, i, j,
                                          -1, -space.dist[i][j]});
            if (j > i && space.dist[i][j] != space.dist[j][i])
                rep.violations.push_back(
                    {Violation::Kind::asymmetry, i, j, -1,
                     std::abs(space.dist[i][j] - space.dist[j][i])});
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double excess =
                    space.dist[i][j] - (space.dist[i][k] + space.dist[k][j]);
                if (excess > tol_metric)
                    rep.violations.push_back(
                        {Violation::Kind::triangle, i, j, k, excess});
            }
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        if (space.m.weights[i] < 0.0)
            rep.violations.push_back({Violation::Kind::negative_weight, i, -1, -1,
                                      -space.m.weights[i]});
        total += space.m.weights[i];
    }
    if (std::abs(total - 1.0) > tol_mass)
        rep.violations.push_back({Violation::Kind::mass_normalization, -1, -1, -1,
                                  std::abs(total - 1.0)});
    return rep;
}

// Checks a free-standing measure against a space: nonnegative weights of the
// right length, total mass 1 within tol_mass.
inline void require_valid_measure(const MetricMeasureSpace& space,
                                  const Measure& mu,
                                  double tol_mass = 1e-12) {
    if (static_cast<int>(mu.weights.size()) != space.n)
        throw std::invalid_argument("measure size does not match space");
    for (double w : mu.weights)
        if (w < 0.0) throw std::invalid_argument("measure has a negative weight");
    const double total = mu.total_mass();
    if (std::abs(total - 1.0) > tol_mass)
        throw std::invalid_argument("measure mass deviates from 1 beyond tolerance");
}

inline Measure dirac(const MetricMeasureSpace& space, int i) {
    if (i < 0 || i >= space.n) throw std::invalid_argument("dirac: index out of range");
    Measure mu;
    mu.weights.assign(space.n, 0.0);
    mu.weights[i] = 1.0;
    return mu;
}

inline Measure uniform_on(const MetricMeasureSpace& space,
                          const std::vector<int>& atoms) {
    if (atoms.empty()) throw std::invalid_argument("uniform_on: empty atom set");
    Measure mu;
    mu.weights.assign(space.n, 0.0);
    const double w = 1.0 / static_cast<double>(atoms.size());
    for (int a : atoms) {
        if (a < 0 || a >= space.n)
            throw std::invalid_argument("uniform_on: index out of range");
        mu.weights[a] = w;
    }
    return mu;
}

namespace detail {
inline void normalize(std::vector<double>& w) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (total <= 0.0) throw std::invalid_argument("cannot normalize zero mass");
    for (double& x : w) x /= total;
}
}  // namespace detail

// M points at angles 2*pi*k/M on the unit circle with arc-length distance.
// Distances come from the index formula, so rotational symmetry is exact.
inline MetricMeasureSpace build_circle(int M) {
    if (M < 3) throw std::invalid_argument("build_circle: M must be >= 3");
    MetricMeasureSpace s;
    s.n = M;
    const double step = 2.0 * M_PI / static_cast<double>(M);
    s.labels.reserve(M);
    s.coords.reserve(M);
    for (int k = 0; k < M; ++k) {
        const double angle = step * static_cast<double>(k);
        s.labels.push_back("theta=" + std::to_string(angle));
        s.coords.push_back({std::cos(angle), std::sin(angle)});
    }
    s.dist.assign(M, std::vector<double>(M, 0.0));
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            const int k = std::abs(i - j);
            s.dist[i][j] = step * static_cast<double>(std::min(k, M - k));
        }
    s.m.weights.assign(M, 1.0 / static_cast<double>(M));
    return s;
}

// Unit sphere discretized as 2 poles + L interior latitude rings of K points.
// Rings sit at colatitudes pi*l/(L+1); odd L therefore includes the exact
// equator. m[i] is the area of the latitude band / longitude sector around
// point i (poles get their caps). Southern weights mirror northern ones
// bitwise so pole swap is an exact symmetry of m.
inline MetricMeasureSpace build_sphere_grid(int L, int K) {
    if (L < 1) throw std::invalid_argument("build_sphere_grid: L must be >= 1");
    if (K < 3) throw std::invalid_argument("build_sphere_grid: K must be >= 3");
    MetricMeasureSpace s;
    const int n = 2 + L * K;
    s.n = n;
    s.labels.reserve(n);
    s.coords.reserve(n);
    s.coords.push_back({0.0, 0.0, 1.0});
    s.labels.push_back("pn");
    s.coords.push_back({0.0, 0.0, -1.0});
    s.labels.push_back("ps");
    for (int l = 1; l <= L; ++l) {
        const double theta = M_PI * (static_cast<double>(l) / static_cast<double>(L + 1));
        const double st = std::sin(theta), ct = std::cos(theta);
        for (int k = 0; k < K; ++k) {
            const double phi = 2.0 * M_PI * (static_cast<double>(k) / static_cast<double>(K));
            s.coords.push_back({st * std::cos(phi), st * std::sin(phi), ct});
            s.labels.push_back("r" + std::to_string(l) + "c" + std::to_string(k));
        }
    }
    s.dist.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double dot = 0.0;
            for (int c = 0; c < 3; ++c) dot += s.coords[i][c] * s.coords[j][c];
            dot = std::clamp(dot, -1.0, 1.0);
            s.dist[i][j] = std::acos(dot);
        }
    // Band/cap areas. Cell boundaries are colatitude midpoints; the area of a
    // band [a,b] on the unit sphere is proportional to cos(a) - cos(b).
    std::vector<double> ring_weight(L + 1, 0.0);  // 1-based
    const double cap =
        (1.0 - std::cos(M_PI * (0.5 / static_cast<double>(L + 1)))) / 2.0;
    for (int l = 1; l <= (L + 1) / 2; ++l) {
        const double lo = M_PI * ((static_cast<double>(l) - 0.5) / static_cast<double>(L + 1));
        const double hi = M_PI * ((static_cast<double>(l) + 0.5) / static_cast<double>(L + 1));
        const double band = (std::cos(lo) - std::cos(hi)) / 2.0;
        ring_weight[l] = band / static_cast<double>(K);
        ring_weight[L + 1 - l] = ring_weight[l];  // exact mirror
    }
    s.m.weights.assign(n, 0.0);
    s.m.weights[0] = cap;
    s.m.weights[1] = cap;
    for (int l = 1; l <= L; ++l)
        for (int k = 0; k < K; ++k) s.m.weights[2 + (l - 1) * K + k] = ring_weight[l];
    detail::normalize(s.m.weights);
    return s;
}

// M evenly spaced points on [0,1] with |x - y| distance and uniform m.
inline MetricMeasureSpace build_interval(int M) {
    if (M < 2) throw std::invalid_argument("build_interval: M must be >= 2");
    MetricMeasureSpace s;
    s.n = M;
    s.coords.reserve(M);
    s.labels.reserve(M);
    for (int k = 0; k < M; ++k) {
        const double x = static_cast<double>(k) / static_cast<double>(M - 1);
        s.coords.push_back({x});
        s.labels.push_back("x=" + std::to_string(x));
    }
    s.dist.assign(M, std::vector<double>(M, 0.0));
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            s.dist[i][j] = std::abs(s.coords[i][0] - s.coords[j][0]);
    s.m.weights.assign(M, 1.0 / static_cast<double>(M));
    return s;
}

struct Edge {
    int i, j;
    double length;
};

// Shortest-path metric of a weighted undirected graph (Floyd-Warshall).
// m defaults to uniform when not given.
inline MetricMeasureSpace build_graph(const std::vector<Edge>& edges, int n,
                                      const std::vector<double>& m_weights = {}) {
    if (n < 1) throw std::invalid_argument("build_graph: n must be >= 1");
    for (const Edge& e : edges) {
        if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
            throw std::invalid_argument("build_graph: edge endpoint out of range");
        if (!(e.length > 0.0))
            throw std::invalid_argument("build_graph: edge length must be positive");
    }
    MetricMeasureSpace s;
    s.n = n;
    const double inf = std::numeric_limits<double>::infinity();
    s.dist.assign(n, std::vector<double>(n, inf));
    for (int i = 0; i < n; ++i) s.dist[i][i] = 0.0;
    for (const Edge& e : edges) {
        s.dist[e.i][e.j] = std::min(s.dist[e.i][e.j], e.length);
        s.dist[e.j][e.i] = s.dist[e.i][e.j];
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double via = s.dist[i][k] + s.dist[k][j];
                if (via < s.dist[i][j]) s.dist[i][j] = s.dist[j][i] = via;
            }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!std::isfinite(s.dist[i][j]))
                throw disconnected_error("build_graph: graph is disconnected");
    if (m_weights.empty()) {
        s.m.weights.assign(n, 1.0 / static_cast<double>(n));
    } else {
        if (static_cast<int>(m_weights.size()) != n)
            throw std::invalid_argument("build_graph: m has wrong length");
        for (double w : m_weights)
            if (w < 0.0) throw std::invalid_argument("build_graph: negative m weight");
        s.m.weights = m_weights;
        detail::normalize(s.m.weights);
    }
    return s;
}

}  // namespace wrb
