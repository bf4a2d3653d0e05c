#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "attachnet/analytics.hpp"
#include "attachnet/csv.hpp"
#include "attachnet/diagnostics.hpp"
#include "attachnet/error.hpp"

namespace attachnet {

std::string_view to_string(CentralityKind k) {
    switch (k) {
        case CentralityKind::degree_in: return "degree_in";
        case CentralityKind::degree_out: return "degree_out";
        case CentralityKind::betweenness: return "betweenness";
        case CentralityKind::pagerank: return "pagerank";
    }
    return "?";
}

std::vector<int> CentralityVector::ranking() const {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
    });
    return order;
}

DegreeCentrality degree_centrality(const Dag& dag) {
    DegreeCentrality d{{CentralityKind::degree_in, dag.names(), {}}, {CentralityKind::degree_out, dag.names(), {}}};
    for (int v = 0; v < static_cast<int>(dag.size()); ++v) {
        d.in.values.push_back(static_cast<double>(dag.in_degree(v)));
        d.out.values.push_back(static_cast<double>(dag.out_degree(v)));
    }
    return d;
}

CentralityVector betweenness(const Dag& dag, const GaussianBnParams& params) {
    params.check_consistent(dag);
    const int n = static_cast<int>(dag.size());
    const auto sn = static_cast<std::size_t>(n);
    std::vector<std::vector<std::pair<int, double>>> out(sn);
    for (const auto& e : params.entries()) {
        if (e.coefficient == 0.0) {
            warn("zero coefficient on " + dag.name(e.from) + " -> " + dag.name(e.to) + "; arc ignored for betweenness");
            continue;
        }
        out[static_cast<std::size_t>(e.from)].push_back({e.to, 1.0 / std::abs(e.coefficient)});
    }

    constexpr double inf = std::numeric_limits<double>::infinity();
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
    std::vector<double> cb(sn, 0.0);
    for (int s = 0; s < n; ++s) {
        // Brandes: Dijkstra from s, then dependency accumulation in reverse settle order.
        std::vector<double> dist(sn, inf), sigma(sn, 0.0), delta(sn, 0.0);
        std::vector<std::vector<int>> pred(sn);
        std::vector<char> done(sn, 0);
        std::vector<int> settled;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[static_cast<std::size_t>(s)] = 0.0;
        sigma[static_cast<std::size_t>(s)] = 1.0;
        pq.push({0.0, s});
        while (!pq.empty()) {
            const auto [d, u] = pq.top();
            pq.pop();
            const auto su = static_cast<std::size_t>(u);
            if (done[su] || d > dist[su]) continue;
            done[su] = 1;
            settled.push_back(u);
            for (auto [v, len] : out[su]) {
                const auto sv = static_cast<std::size_t>(v);
                const double nd = d + len;
                if (dist[sv] == inf || (nd < dist[sv] && !same(nd, dist[sv]))) {
                    dist[sv] = nd;
                    sigma[sv] = sigma[su];
                    pred[sv].assign(1, u);
                    pq.push({nd, v});
                } else if (same(nd, dist[sv])) {
                    sigma[sv] += sigma[su];
                    pred[sv].push_back(u);
                }
            }
        }
        for (auto it = settled.rbegin(); it != settled.rend(); ++it) {
            const auto sw = static_cast<std::size_t>(*it);
            for (int p : pred[sw]) {
                const auto sp = static_cast<std::size_t>(p);
                delta[sp] += sigma[sp] / sigma[sw] * (1.0 + delta[sw]);
            }
            if (*it != s) cb[sw] += delta[sw];
        }
    }
    return {CentralityKind::betweenness, dag.names(), cb};
}

CentralityVector pagerank(const Dag& dag, const GaussianBnParams& params, double damping) {
    if (!(damping > 0.0 && damping < 1.0)) throw ValidationError("damping must lie in (0, 1)");
    params.check_consistent(dag);
    const auto n = dag.size();
    if (n == 0) return {CentralityKind::pagerank, {}, {}};
    std::vector<double> wout(n, 0.0);
    const auto entries = params.entries();
    for (const auto& e : entries) wout[static_cast<std::size_t>(e.from)] += std::abs(e.coefficient);

    const double uniform = 1.0 / static_cast<double>(n);
    std::vector<double> x(n, uniform), next(n);
    for (int iter = 0; iter < 100000; ++iter) {
        double dangling = 0.0;
        for (std::size_t u = 0; u < n; ++u)
            if (wout[u] == 0.0) dangling += x[u];
        std::fill(next.begin(), next.end(), (1.0 - damping) * uniform + damping * dangling * uniform);
        for (const auto& e : entries) {
            const auto u = static_cast<std::size_t>(e.from);
            if (wout[u] > 0.0) next[static_cast<std::size_t>(e.to)] += damping * x[u] * std::abs(e.coefficient) / wout[u];
        }
        double diff = 0.0;
        for (std::size_t v = 0; v < n; ++v) diff = std::max(diff, std::abs(next[v] - x[v]));
        x.swap(next);
        if (diff < 1e-12) {
            const double sum = std::accumulate(x.begin(), x.end(), 0.0);
            for (auto& v : x) v /= sum;
            return {CentralityKind::pagerank, dag.names(), x};
        }
    }
    throw NumericError("pagerank did not converge in 100000 iterations");
}

void write_centrality_csv(std::ostream& out, const CentralityVector& v) {
    out << "node,value\n";
    for (std::size_t i = 0; i < v.nodes.size(); ++i) out << v.nodes[i] << ',' << csv::format_double(v.values[i]) << '\n';
}

}  // namespace attachnet
