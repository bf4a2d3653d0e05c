#include "attachnet/influence.hpp"

#include <algorithm>
#include <cmath>

#include "attachnet/csv.hpp"
#include "attachnet/error.hpp"

namespace attachnet {

namespace {

void check_node(const Dag& dag, int v) {
    if (v < 0 || v >= static_cast<int>(dag.size())) throw ValidationError("node index out of range");
}

}  // namespace

std::vector<std::vector<int>> enumerate_paths(const Dag& dag, int from, int to, std::size_t cap) {
    check_node(dag, from);
    check_node(dag, to);
    if (from == to) throw ValidationError("path enumeration needs distinct endpoints");
    std::vector<std::vector<int>> paths;
    const auto reach_to = dag.ancestors_of(to);
    if (!reach_to[static_cast<std::size_t>(from)]) return paths;

    std::vector<int> current{from};
    // Explicit stack of (node, next child position) keeps deep graphs off the call stack.
    std::vector<std::pair<int, std::size_t>> stack{{from, 0}};
    while (!stack.empty()) {
        auto& [u, pos] = stack.back();
        const auto& kids = dag.children(u);
        if (pos == kids.size()) {
            stack.pop_back();
            current.pop_back();
            continue;
        }
        const int v = kids[pos++];
        if (!reach_to[static_cast<std::size_t>(v)]) continue;
        current.push_back(v);
        if (v == to) {
            if (paths.size() == cap)
                throw PathLimitError("more than " + std::to_string(cap) +
                                     " paths; use total_influence for the aggregate instead");
            paths.push_back(current);
            current.pop_back();
        } else {
            stack.push_back({v, 0});
        }
    }
    return paths;
}

double path_product(const std::vector<int>& path, const GaussianBnParams& params) {
    if (path.empty()) throw ValidationError("empty path");
    double p = 1.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) p *= params.coefficient(path[i], path[i + 1]);
    return p;
}

double total_influence(const Dag& dag, const GaussianBnParams& params, int from, int to) {
    check_node(dag, from);
    check_node(dag, to);
    params.check_consistent(dag);
    if (from == to) return 1.0;
    const auto down = dag.descendants_of(from);
    if (!down[static_cast<std::size_t>(to)]) return 0.0;
    std::vector<double> infl(dag.size(), 0.0);
    infl[static_cast<std::size_t>(from)] = 1.0;
    for (int v : dag.topological_order()) {
        if (v == from || !down[static_cast<std::size_t>(v)]) continue;
        const auto& node = params.node(v);
        double s = 0.0;
        for (std::size_t j = 0; j < node.parents.size(); ++j)
            s += node.coefficients[j] * infl[static_cast<std::size_t>(node.parents[j])];
        infl[static_cast<std::size_t>(v)] = s;
        if (v == to) break;
    }
    return infl[static_cast<std::size_t>(to)];
}

std::vector<InfluencePath> top_paths(const Dag& dag, const GaussianBnParams& params, int from, int to, std::size_t k,
                                     std::size_t cap) {
    if (k < 1) throw ValidationError("k must be >= 1");
    std::vector<InfluencePath> all;
    for (auto& p : enumerate_paths(dag, from, to, cap)) {
        const double prod = path_product(p, params);
        all.push_back({std::move(p), prod});
    }
    std::sort(all.begin(), all.end(), [](const InfluencePath& a, const InfluencePath& b) {
        const double x = std::abs(a.product), y = std::abs(b.product);
        return x != y ? x > y : a.nodes < b.nodes;
    });
    if (all.size() > k) all.resize(k);
    return all;
}

CouplingMatrix cluster_coupling(const Dag& dag, const GaussianBnParams& params, const Partition& partition) {
    params.check_consistent(dag);
    std::vector<int> cluster(dag.size(), -1);
    for (std::size_t i = 0; i < partition.nodes.size(); ++i) {
        const auto v = dag.find(partition.nodes[i]);
        if (!v) throw ValidationError("partition lists unknown node " + partition.nodes[i]);
        cluster[static_cast<std::size_t>(*v)] = partition.assignment[i];
    }
    for (std::size_t v = 0; v < cluster.size(); ++v)
        if (cluster[v] < 0) throw ValidationError("partition does not cover node " + dag.names()[v]);
    CouplingMatrix m;
    for (const auto& e : params.entries()) {
        const int a = cluster[static_cast<std::size_t>(e.from)], b = cluster[static_cast<std::size_t>(e.to)];
        if (a == b) continue;
        m[{partition.labels[static_cast<std::size_t>(a)], partition.labels[static_cast<std::size_t>(b)]}] +=
            std::abs(e.coefficient);
    }
    return m;
}

double median_abs_coefficient(const GaussianBnParams& params) {
    std::vector<double> v;
    for (const auto& e : params.entries()) v.push_back(std::abs(e.coefficient));
    if (v.empty()) throw ValidationError("median of an empty coefficient set");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::string format_path(const Dag& dag, const std::vector<int>& path) {
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) s += '>';
        s += dag.name(path[i]);
    }
    return s;
}

void write_influence_csv(std::ostream& out, const Dag& dag, int from, int to, double total,
                         const std::vector<InfluencePath>& paths) {
    out << "source,target,total,path_rank,path,product\n";
    const std::string head = dag.name(from) + ',' + dag.name(to) + ',' + csv::format_double(total) + ',';
    if (paths.empty()) {
        out << head << ",,\n";
        return;
    }
    for (std::size_t i = 0; i < paths.size(); ++i)
        out << head << i + 1 << ',' << format_path(dag, paths[i].nodes) << ',' << csv::format_double(paths[i].product)
            << '\n';
}

}  // namespace attachnet
