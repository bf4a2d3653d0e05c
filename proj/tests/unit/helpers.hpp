#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "attachnet/dag.hpp"
#include "attachnet/params.hpp"
#include "attachnet/random.hpp"

namespace testing {

inline std::vector<std::string> names(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("V" + std::to_string(i));
    return out;
}

// Random DAG over a random permutation; each forward pair kept with probability p.
inline attachnet::Dag random_dag(int n, double p, attachnet::Rng& rng) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) std::swap(perm[static_cast<std::size_t>(i)], perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
    attachnet::Dag g(names(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p) g.add_arc(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    return g;
}

inline attachnet::GaussianBnParams random_params(const attachnet::Dag& g, attachnet::Rng& rng, double lo = -1.0,
                                                 double hi = 1.0) {
    attachnet::GaussianBnParams p(g);
    for (int v = 0; v < static_cast<int>(g.size()); ++v) {
        auto& node = p.node(v);
        node.intercept = rng.uniform(-1.0, 1.0);
        node.residual_sd = rng.uniform(0.5, 1.5);
        for (auto& c : node.coefficients) c = rng.uniform(lo, hi);
    }
    return p;
}

// Ancestral sampling from a linear-Gaussian network.
inline Eigen::MatrixXd simulate(const attachnet::Dag& g, const attachnet::GaussianBnParams& p, std::size_t n,
                                attachnet::Rng& rng) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(g.size()));
    const auto order = g.topological_order();
    for (std::size_t r = 0; r < n; ++r)
        for (int v : order) {
            const auto& node = p.node(v);
            double val = node.intercept + node.residual_sd * rng.normal();
            for (std::size_t j = 0; j < node.parents.size(); ++j)
                val += node.coefficients[j] * x(static_cast<Eigen::Index>(r), node.parents[j]);
            x(static_cast<Eigen::Index>(r), v) = val;
        }
    return x;
}

// Every labelled DAG on n nodes (n <= 5), by brute force over pair states.
inline std::vector<attachnet::Dag> all_dags(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    long codes = 1;
    for (std::size_t k = 0; k < pairs.size(); ++k) codes *= 3;
    std::vector<attachnet::Dag> out;
    for (long code = 0; code < codes; ++code) {
        attachnet::Dag g(names(n));
        long c = code;
        bool ok = true;
        for (auto [i, j] : pairs) {
            const int state = static_cast<int>(c % 3);
            c /= 3;
            if (state == 0) continue;
            const int u = state == 1 ? i : j, v = state == 1 ? j : i;
            if (g.reaches(v, u)) {
                ok = false;
                break;
            }
            g.add_arc(u, v);
        }
        if (ok) out.push_back(g);
    }
    return out;
}

}  // namespace testing
