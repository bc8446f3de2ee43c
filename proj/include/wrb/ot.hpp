#pragma once

// Exact discrete optimal transport with squared-distance cost on a finite
// metric measure space. The solver is a dense transportation simplex on the
// support-restricted bipartite problem; it returns the optimal plan together
// with dual potentials extended to the whole space, so optimality is
// independently checkable via verify_certificate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wrb/space.hpp"

namespace wrb {

struct PlanEntry {
    int i, j;
    double mass;
};

struct TransportPlan {
    std::vector<PlanEntry> entries;  // mass > 0, sorted by (i, j)
    double cost = 0.0;               // sum mass * dist^2
    std::vector<double> dual_source; // length n
    std::vector<double> dual_target; // length n
    double source_scale = 1.0;       // factor applied to renormalize the input
    double target_scale = 1.0;
};

namespace detail {

// Dense transportation simplex. a and b are positive and sum to ~1 each.
// cost(i, j) must be callable for 0 <= i < p, 0 <= j < q.
//
// Pivot determinism: entering arc is the most negative reduced cost with
// lowest flat index on ties; leaving arc is the minimum-flow candidate with
// lowest flat index on ties. If the pivot budget is exhausted (degenerate
// cycling) the entering rule falls back to Bland's rule, which terminates.
template <typename CostFn>
class TransportSimplex {
public:
    TransportSimplex(std::vector<double> a, std::vector<double> b, CostFn cost)
        : a_(std::move(a)), b_(std::move(b)), cost_(cost),
          p_(static_cast<int>(a_.size())), q_(static_cast<int>(b_.size())) {}

    void run() {
        build_initial_basis();
        double cmax = 0.0;
        for (int i = 0; i < p_; ++i)
            for (int j = 0; j < q_; ++j) cmax = std::max(cmax, std::abs(cost_(i, j)));
        const double tol = cmax * 1e-14;

        const long budget_greedy = 1000 + 100L * (p_ + q_);
        const long budget_bland = budget_greedy + 10L * p_ * q_ + 10000;
        long pivots = 0;
        while (true) {
            compute_duals();
            const bool bland = pivots >= budget_greedy;
            int ei = -1, ej = -1;
            double best = -tol;
            for (int i = 0; i < p_; ++i) {
                for (int j = 0; j < q_; ++j) {
                    const double r = cost_(i, j) - phi_[i] - psi_[j];
                    if (r < best) {
                        best = r;
                        ei = i;
                        ej = j;
                        if (bland) break;
                    }
                }
                if (bland && ei >= 0) break;
            }
            if (ei < 0) return;  // optimal
            pivot(ei, ej);
            if (++pivots > budget_bland)
                throw std::runtime_error("transport simplex failed to terminate");
        }
    }

    // Valid after run().
    const std::vector<double>& phi() const { return phi_; }
    const std::vector<double>& psi() const { return psi_; }

    // Positive flows as (i, j, mass).
    std::vector<PlanEntry> flows() const {
        std::vector<PlanEntry> out;
        for (const Arc& arc : basis_)
            if (arc.flow > 0.0) out.push_back({arc.i, arc.j, arc.flow});
        return out;
    }

private:
    struct Arc {
        int i, j;
        double flow;
    };

    void build_initial_basis() {
        // Northwest-corner start: deterministic spanning tree with p+q-1 arcs.
        std::vector<double> ra = a_, rb = b_;
        basis_.clear();
        basis_.reserve(static_cast<std::size_t>(p_ + q_ - 1));
        int i = 0, j = 0;
        while (true) {
            const double t = std::min(ra[i], rb[j]);
            basis_.push_back({i, j, t});
            ra[i] -= t;
            rb[j] -= t;
            if (i == p_ - 1 && j == q_ - 1) break;
            if (ra[i] <= rb[j] && i < p_ - 1)
                ++i;
            else if (j < q_ - 1)
                ++j;
            else
                ++i;
        }
    }

    // Tree traversal from source node 0 with phi[0] = 0.
    void compute_duals() {
        phi_.assign(p_, 0.0);
        psi_.assign(q_, 0.0);
        std::vector<std::vector<int>> src_arcs(p_), tgt_arcs(q_);
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            src_arcs[basis_[k].i].push_back(static_cast<int>(k));
            tgt_arcs[basis_[k].j].push_back(static_cast<int>(k));
        }
        std::vector<char> src_done(p_, 0), tgt_done(q_, 0);
        std::vector<int> stack = {0};  // node ids: sources 0..p-1, targets p..p+q-1
        src_done[0] = 1;
        while (!stack.empty()) {
            const int node = stack.back();
            stack.pop_back();
            if (node < p_) {
                for (int k : src_arcs[node]) {
                    const int j = basis_[k].j;
                    if (tgt_done[j]) continue;
                    psi_[j] = cost_(node, j) - phi_[node];
                    tgt_done[j] = 1;
                    stack.push_back(p_ + j);
                }
            } else {
                const int j = node - p_;
                for (int k : tgt_arcs[j]) {
                    const int i = basis_[k].i;
                    if (src_done[i]) continue;
                    phi_[i] = cost_(i, j) - psi_[j];
                    src_done[i] = 1;
                    stack.push_back(i);
                }
            }
        }
    }

    void pivot(int ei, int ej) {
        // Unique tree path from target node ej back to source node ei.
        std::vector<std::vector<std::pair<int, int>>> adj(p_ + q_);  // (nbr, arc)
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            const int u = basis_[k].i, v = p_ + basis_[k].j;
            adj[u].push_back({v, static_cast<int>(k)});
            adj[v].push_back({u, static_cast<int>(k)});
        }
        std::vector<int> parent(p_ + q_, -1), via(p_ + q_, -1);
        std::vector<char> seen(p_ + q_, 0);
        std::vector<int> stack = {ei};
        seen[ei] = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            if (u == p_ + ej) break;
            for (const auto& [v, k] : adj[u]) {
                if (seen[v]) continue;
                seen[v] = 1;
                parent[v] = u;
                via[v] = k;
                stack.push_back(v);
            }
        }
        // Walk back from ej to ei; arcs alternate -theta, +theta, ... starting
        // with -theta on the arc incident to target ej.
        std::vector<int> minus, plus;
        int node = p_ + ej;
        bool negative = true;
        while (node != ei) {
            const int k = via[node];
            (negative ? minus : plus).push_back(k);
            node = parent[node];
            negative = !negative;
        }
        double theta = std::numeric_limits<double>::infinity();
        int leave = -1;
        long leave_key = 0;
        for (int k : minus) {
            const long key = static_cast<long>(basis_[k].i) * q_ + basis_[k].j;
            if (basis_[k].flow < theta ||
                (basis_[k].flow == theta && (leave < 0 || key < leave_key))) {
                theta = basis_[k].flow;
                leave = k;
                leave_key = key;
            }
        }
        for (int k : minus) basis_[k].flow -= theta;
        for (int k : plus) basis_[k].flow += theta;
        basis_[leave] = {ei, ej, theta};
    }

    std::vector<double> a_, b_;
    CostFn cost_;
    int p_, q_;
    std::vector<Arc> basis_;
    std::vector<double> phi_, psi_;
};

}  // namespace detail

// Exact optimal transport between two measures on the same space with cost
// dist^2. Both measures are renormalized to unit mass by proportional scaling
// before solving; the applied factors are recorded on the plan.
inline TransportPlan solve_ot(const MetricMeasureSpace& space,
                              const Measure& source, const Measure& target,
                              double tol_mass = 1e-12) {
    require_valid_measure(space, source, tol_mass);
    require_valid_measure(space, target, tol_mass);

    const double stot = source.total_mass(), ttot = target.total_mass();
    std::vector<int> src_idx, tgt_idx;
    std::vector<double> a, b;
    for (int i = 0; i < space.n; ++i)
        if (source.weights[i] > 0.0) {
            src_idx.push_back(i);
            a.push_back(source.weights[i] / stot);
        }
    for (int j = 0; j < space.n; ++j)
        if (target.weights[j] > 0.0) {
            tgt_idx.push_back(j);
            b.push_back(target.weights[j] / ttot);
        }
    const int p = static_cast<int>(a.size()), q = static_cast<int>(b.size());

    auto cost = [&](int i, int j) { return space.d2(src_idx[i], tgt_idx[j]); };
    detail::TransportSimplex<decltype(cost)> simplex(a, b, cost);
    simplex.run();

    TransportPlan plan;
    plan.source_scale = 1.0 / stot;
    plan.target_scale = 1.0 / ttot;
    plan.entries = simplex.flows();
    for (PlanEntry& e : plan.entries) {
        e.i = src_idx[e.i];
        e.j = tgt_idx[e.j];
    }
    std::sort(plan.entries.begin(), plan.entries.end(),
              [](const PlanEntry& x, const PlanEntry& y) {
                  return x.i != y.i ? x.i < y.i : x.j < y.j;
              });
    plan.cost = 0.0;
    for (const PlanEntry& e : plan.entries) plan.cost += e.mass * space.d2(e.i, e.j);

    // Extend the support duals to every point, preserving feasibility
    // phi[i] + psi[j] <= d(i,j)^2 on the full index set.
    plan.dual_source.assign(space.n, 0.0);
    plan.dual_target.assign(space.n, 0.0);
    std::vector<char> is_src(space.n, 0), is_tgt(space.n, 0);
    for (int i = 0; i < p; ++i) {
        plan.dual_source[src_idx[i]] = simplex.phi()[i];
        is_src[src_idx[i]] = 1;
    }
    for (int j = 0; j < q; ++j) {
        plan.dual_target[tgt_idx[j]] = simplex.psi()[j];
        is_tgt[tgt_idx[j]] = 1;
    }
    for (int j = 0; j < space.n; ++j) {
        if (is_tgt[j]) continue;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < p; ++i)
            best = std::min(best, space.d2(src_idx[i], j) - simplex.phi()[i]);
        plan.dual_target[j] = best;
    }
    for (int i = 0; i < space.n; ++i) {
        if (is_src[i]) continue;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < space.n; ++j)
            best = std::min(best, space.d2(i, j) - plan.dual_target[j]);
        plan.dual_source[i] = best;
    }
    return plan;
}

inline double w2(const MetricMeasureSpace& space, const Measure& source,
                 const Measure& target, double tol_mass = 1e-12) {
    return std::sqrt(solve_ot(space, source, target, tol_mass).cost);
}

// LP-duality check of a plan: marginals, dual feasibility, complementary
// slackness, and primal/dual objective agreement. A true result certifies
// optimality up to tol_dual * n without trusting the solver.
inline bool verify_certificate(const MetricMeasureSpace& space,
                               const TransportPlan& plan, const Measure& source,
                               const Measure& target, double tol_dual,
                               double tol_mass = 1e-12) {
    const int n = space.n;
    const double stot = source.total_mass(), ttot = target.total_mass();
    std::vector<double> row(n, 0.0), col(n, 0.0);
    for (const PlanEntry& e : plan.entries) {
        if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n || e.mass < 0.0) return false;
        row[e.i] += e.mass;
        col[e.j] += e.mass;
    }
    for (int i = 0; i < n; ++i) {
        if (std::abs(row[i] - source.weights[i] / stot) > tol_mass) return false;
        if (std::abs(col[i] - target.weights[i] / ttot) > tol_mass) return false;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (plan.dual_source[i] + plan.dual_target[j] > space.d2(i, j) + tol_dual)
                return false;
    for (const PlanEntry& e : plan.entries)
        if (e.mass > 0.0 &&
            plan.dual_source[e.i] + plan.dual_target[e.j] < space.d2(e.i, e.j) - tol_dual)
            return false;
    double dual_obj = 0.0;
    for (int i = 0; i < n; ++i) dual_obj += plan.dual_source[i] * (source.weights[i] / stot);
    for (int j = 0; j < n; ++j) dual_obj += plan.dual_target[j] * (target.weights[j] / ttot);
    return std::abs(plan.cost - dual_obj) <= tol_dual * n;
}

// Brute-force oracle: minimum average squared distance over all k!
// bijections between two equal-size uniform supports.
inline double oracle_ot_uniform(const MetricMeasureSpace& space,
                                const std::vector<int>& support_a,
                                const std::vector<int>& support_b) {
    const std::size_t k = support_a.size();
    if (k == 0 || k != support_b.size())
        throw std::invalid_argument("oracle_ot_uniform: supports must be equal-size and nonempty");
    if (k > 8) throw std::invalid_argument("oracle_ot_uniform: k must be <= 8");
    std::vector<int> perm(k);
    for (std::size_t t = 0; t < k; ++t) perm[t] = static_cast<int>(t);
    double best = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (std::size_t t = 0; t < k; ++t)
            c += space.d2(support_a[t], support_b[static_cast<std::size_t>(perm[t])]);
        if (c < best) best = c;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(k);
}

struct VarianceResult {
    double value = 0.0;          // min_y sum_x d(x,y)^2 mu(x)
    std::vector<int> argmin_set; // all y within tol_b of the minimum
};

inline VarianceResult variance(const MetricMeasureSpace& space, const Measure& mu,
                               double tol_b) {
    require_valid_measure(space, mu);
    std::vector<double> c(space.n, 0.0);
    for (int y = 0; y < space.n; ++y) {
        double acc = 0.0;
        for (int x = 0; x < space.n; ++x) acc += mu.weights[x] * space.d2(x, y);
        c[y] = acc;
    }
    VarianceResult out;
    out.value = *std::min_element(c.begin(), c.end());
    for (int y = 0; y < space.n; ++y)
        if (c[y] <= out.value + tol_b) out.argmin_set.push_back(y);
    return out;
}

}  // namespace wrb
