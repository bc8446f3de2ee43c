#pragma once

// Seeded pseudorandomness for the property suites. Everything derives from a
// SplitMix64 stream so runs are bit-reproducible across platforms; no
// wall-clock seeding anywhere.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wrb/space.hpp"

namespace wrb {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform in {0, ..., n-1}. Plain modulo: the bias is negligible at the
    // suite's scales and the sequence stays portable.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("below: n must be positive");
        return next() % n;
    }

private:
    std::uint64_t state_;
};

// Dense random measure: iid uniform weights, normalized. Full support almost
// surely.
inline Measure random_measure(const MetricMeasureSpace& space, SplitMix64& rng) {
    Measure mu;
    mu.weights.resize(space.n);
    for (double& w : mu.weights) w = rng.uniform01() + 1e-12;
    detail::normalize(mu.weights);
    return mu;
}

// Random measure on k distinct atoms with uniform random masses.
inline Measure random_sparse_measure(const MetricMeasureSpace& space, int k,
                                     SplitMix64& rng) {
    if (k < 1 || k > space.n)
        throw std::invalid_argument("random_sparse_measure: bad atom count");
    std::vector<int> pool(space.n);
    for (int i = 0; i < space.n; ++i) pool[i] = i;
    Measure mu;
    mu.weights.assign(space.n, 0.0);
    for (int t = 0; t < k; ++t) {
        const auto pick = static_cast<std::size_t>(rng.below(pool.size()));
        mu.weights[pool[pick]] = rng.uniform01() + 1e-3;
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    detail::normalize(mu.weights);
    return mu;
}

// Random measure supported inside the given index set.
inline Measure random_measure_on(const MetricMeasureSpace& space,
                                 const std::vector<int>& support,
                                 SplitMix64& rng) {
    if (support.empty())
        throw std::invalid_argument("random_measure_on: empty support");
    Measure mu;
    mu.weights.assign(space.n, 0.0);
    for (int i : support) mu.weights[i] = rng.uniform01() + 1e-3;
    detail::normalize(mu.weights);
    return mu;
}

// Connected random graph space: a random spanning tree plus extra edges,
// lengths uniform in [0.2, 1].
inline MetricMeasureSpace random_graph_space(int n, int extra_edges,
                                             SplitMix64& rng,
                                             bool uniform_m = true) {
    if (n < 2) throw std::invalid_argument("random_graph_space: n must be >= 2");
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) {
        const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
        edges.push_back({u, v, rng.uniform(0.2, 1.0)});
    }
    for (int t = 0; t < extra_edges; ++t) {
        const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        if (a == b) continue;
        edges.push_back({a, b, rng.uniform(0.2, 1.0)});
    }
    if (uniform_m) return build_graph(edges, n);
    std::vector<double> mw(n);
    for (double& w : mw) w = rng.uniform01() + 1e-3;
    return build_graph(edges, n, mw);
}

// Random discretely convex table on an M-point grid: nonnegative second
// differences, random affine part.
inline std::vector<double> random_convex_table(int M, SplitMix64& rng) {
    if (M < 2) throw std::invalid_argument("random_convex_table: M must be >= 2");
    std::vector<double> second(M > 2 ? M - 2 : 0);
    for (double& s : second) s = rng.uniform01();
    std::vector<double> phi(M);
    phi[0] = rng.uniform(-1.0, 1.0);
    double slope = rng.uniform(-0.5, 0.5) * static_cast<double>(M);
    phi[1] = phi[0] + slope;
    for (int k = 2; k < M; ++k) {
        slope += second[k - 2];
        phi[k] = phi[k - 1] + slope;
    }
    return phi;
}

}  // namespace wrb
