#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <Eigen/Dense>

#include "attachnet/analytics.hpp"
#include "attachnet/csv.hpp"
#include "attachnet/error.hpp"

namespace attachnet {

std::vector<std::string> Partition::members(int cluster) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (assignment[i] == cluster) out.push_back(nodes[i]);
    return out;
}

const std::string& Partition::label_of(std::string_view node) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == node) return labels[static_cast<std::size_t>(assignment[i])];
    throw ValidationError("node " + std::string(node) + " is not in the partition");
}

bool Partition::same_grouping(const Partition& other) const {
    if (nodes.size() != other.nodes.size()) return false;
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < other.nodes.size(); ++i) pos[other.nodes[i]] = i;
    std::map<int, int> fwd, back;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto it = pos.find(nodes[i]);
        if (it == pos.end()) return false;
        const int a = assignment[i], b = other.assignment[it->second];
        if (auto [f, inserted] = fwd.emplace(a, b); !inserted && f->second != b) return false;
        if (auto [r, inserted] = back.emplace(b, a); !inserted && r->second != a) return false;
    }
    return true;
}

Partition make_partition(std::vector<std::string> nodes, const std::vector<std::string>& cluster_names) {
    if (nodes.size() != cluster_names.size()) throw ValidationError("partition: node/cluster count mismatch");
    std::set<std::string> seen_nodes;
    for (const auto& n : nodes)
        if (!seen_nodes.insert(n).second) throw ValidationError("partition lists node " + n + " twice");
    Partition p;
    std::set<std::string> distinct(cluster_names.begin(), cluster_names.end());
    p.labels.assign(distinct.begin(), distinct.end());
    for (const auto& c : cluster_names)
        p.assignment.push_back(static_cast<int>(std::lower_bound(p.labels.begin(), p.labels.end(), c) - p.labels.begin()));
    p.nodes = std::move(nodes);
    return p;
}

Partition relabel_like(const Partition& partition, const Partition& reference) {
    const int k = partition.cluster_count(), kr = reference.cluster_count();
    std::map<std::string, int> ref_of;
    for (std::size_t i = 0; i < reference.nodes.size(); ++i) ref_of[reference.nodes[i]] = reference.assignment[i];
    std::vector<std::vector<int>> overlap(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(kr), 0));
    for (std::size_t i = 0; i < partition.nodes.size(); ++i)
        if (auto it = ref_of.find(partition.nodes[i]); it != ref_of.end())
            ++overlap[static_cast<std::size_t>(partition.assignment[i])][static_cast<std::size_t>(it->second)];

    struct Cell {
        int count, a, b;
    };
    std::vector<Cell> cells;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < kr; ++b)
            if (overlap[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] > 0)
                cells.push_back({overlap[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)], a, b});
    std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
        return x.count != y.count ? x.count > y.count : std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });
    std::vector<std::string> label(static_cast<std::size_t>(k));
    std::vector<char> used(static_cast<std::size_t>(kr), 0);
    for (const auto& c : cells) {
        if (!label[static_cast<std::size_t>(c.a)].empty() || used[static_cast<std::size_t>(c.b)]) continue;
        label[static_cast<std::size_t>(c.a)] = reference.labels[static_cast<std::size_t>(c.b)];
        used[static_cast<std::size_t>(c.b)] = 1;
    }
    std::set<std::string> taken(reference.labels.begin(), reference.labels.end());
    int next = 1;
    for (auto& l : label) {
        if (!l.empty()) continue;
        while (taken.count("C" + std::to_string(next))) ++next;
        l = "C" + std::to_string(next);
        taken.insert(l);
    }
    std::vector<std::string> names;
    for (int a : partition.assignment) names.push_back(label[static_cast<std::size_t>(a)]);
    return make_partition(partition.nodes, names);
}

namespace {

struct Edge {
    int u, v;
    double w;
};

struct Community {
    std::vector<int> members;
    Eigen::VectorXd p;  // t-step walk distribution scaled by D^{-1/2}
    bool alive = true;
};

}  // namespace

WalktrapResult walktrap(const Dag& dag, const GaussianBnParams& params, int steps) {
    if (steps < 1) throw ValidationError("walktrap needs steps >= 1");
    params.check_consistent(dag);
    const int n = static_cast<int>(dag.size());
    const auto sn = static_cast<std::size_t>(n);

    std::vector<Edge> edges;
    for (const auto& e : params.entries())
        if (e.coefficient != 0.0) edges.push_back({e.from, e.to, std::abs(e.coefficient)});

    // Undirected adjacency plus one self-loop per vertex (mean incident weight,
    // or 1 when isolated), as in the reference formulation.
    std::vector<std::vector<std::pair<int, double>>> adj(sn);
    std::vector<double> strength(sn, 0.0);
    for (const auto& e : edges) {
        adj[static_cast<std::size_t>(e.u)].push_back({e.v, e.w});
        adj[static_cast<std::size_t>(e.v)].push_back({e.u, e.w});
        strength[static_cast<std::size_t>(e.u)] += e.w;
        strength[static_cast<std::size_t>(e.v)] += e.w;
    }
    std::vector<double> degree(sn);
    for (std::size_t v = 0; v < sn; ++v) {
        const double loop = adj[v].empty() ? 1.0 : strength[v] / static_cast<double>(adj[v].size());
        adj[v].push_back({static_cast<int>(v), loop});
        degree[v] = strength[v] + loop;
    }

    auto walk = [&](int start) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
        p(start) = 1.0;
        for (int s = 0; s < steps; ++s) {
            Eigen::VectorXd next = Eigen::VectorXd::Zero(n);
            for (int u = 0; u < n; ++u) {
                if (p(u) == 0.0) continue;
                const double share = p(u) / degree[static_cast<std::size_t>(u)];
                for (auto [v, w] : adj[static_cast<std::size_t>(u)]) next(v) += share * w;
            }
            p = std::move(next);
        }
        for (int v = 0; v < n; ++v) p(v) /= std::sqrt(degree[static_cast<std::size_t>(v)]);
        return p;
    };

    std::vector<Community> comms;
    std::vector<int> comm_of(sn);
    for (int v = 0; v < n; ++v) {
        comms.push_back({{v}, walk(v)});
        comm_of[static_cast<std::size_t>(v)] = v;
    }

    double total_w = 0.0;
    for (const auto& e : edges) total_w += e.w;

    // Standard weighted modularity of the current grouping (loops excluded).
    auto modularity = [&]() {
        if (total_w == 0.0) return 0.0;
        std::map<int, double> internal, incident;
        for (const auto& e : edges) {
            const int a = comm_of[static_cast<std::size_t>(e.u)], b = comm_of[static_cast<std::size_t>(e.v)];
            if (a == b) internal[a] += e.w;
        }
        for (int v = 0; v < n; ++v) incident[comm_of[static_cast<std::size_t>(v)]] += strength[static_cast<std::size_t>(v)];
        double q = 0.0;
        for (const auto& [c, s] : incident) {
            const double in = internal.count(c) ? internal[c] : 0.0;
            q += in / total_w - (s / (2.0 * total_w)) * (s / (2.0 * total_w));
        }
        return q;
    };

    auto delta_sigma = [&](int a, int b) {
        const auto& ca = comms[static_cast<std::size_t>(a)];
        const auto& cb = comms[static_cast<std::size_t>(b)];
        const double sa = static_cast<double>(ca.members.size()), sb = static_cast<double>(cb.members.size());
        return (ca.p - cb.p).squaredNorm() * sa * sb / (sa + sb) / static_cast<double>(n);
    };

    WalktrapResult result;
    double best_q = modularity();
    std::vector<int> best_assignment = comm_of;
    result.modularity_trace.push_back(best_q);
    std::map<std::pair<int, int>, double> cached;

    for (;;) {
        std::set<std::pair<int, int>> adjacent;
        for (const auto& e : edges) {
            int a = comm_of[static_cast<std::size_t>(e.u)], b = comm_of[static_cast<std::size_t>(e.v)];
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            adjacent.insert({a, b});
        }
        if (adjacent.empty()) break;

        std::pair<int, int> pick{-1, -1};
        double pick_ds = 0.0;
        for (const auto& pr : adjacent) {
            auto it = cached.find(pr);
            if (it == cached.end()) it = cached.emplace(pr, delta_sigma(pr.first, pr.second)).first;
            const double ds = it->second;
            if (pick.first < 0 || ds < pick_ds - 1e-14 * std::max(1e-300, std::abs(pick_ds))) {
                pick = pr;
                pick_ds = ds;
            }
        }

        auto& a = comms[static_cast<std::size_t>(pick.first)];
        auto& b = comms[static_cast<std::size_t>(pick.second)];
        const double sa = static_cast<double>(a.members.size()), sb = static_cast<double>(b.members.size());
        Community merged;
        merged.p = (sa * a.p + sb * b.p) / (sa + sb);
        merged.members = a.members;
        merged.members.insert(merged.members.end(), b.members.begin(), b.members.end());
        a.alive = b.alive = false;
        const int id = static_cast<int>(comms.size());
        for (int v : merged.members) comm_of[static_cast<std::size_t>(v)] = id;
        comms.push_back(std::move(merged));

        const double q = modularity();
        result.modularity_trace.push_back(q);
        if (q > best_q) {
            best_q = q;
            best_assignment = comm_of;
        }
    }

    // Dense ids in order of each cluster's first member.
    std::map<int, int> dense;
    for (int id : best_assignment) dense.emplace(id, static_cast<int>(dense.size()));
    result.partition.nodes = dag.names();
    result.partition.assignment.clear();
    for (int id : best_assignment) result.partition.assignment.push_back(dense[id]);
    for (std::size_t c = 0; c < dense.size(); ++c) result.partition.labels.push_back("C" + std::to_string(c + 1));
    result.modularity = best_q;
    return result;
}

void write_partition_csv(std::ostream& out, const Partition& p) {
    out << "node,cluster\n";
    for (std::size_t i = 0; i < p.nodes.size(); ++i)
        out << p.nodes[i] << ',' << p.labels[static_cast<std::size_t>(p.assignment[i])] << '\n';
}

Partition read_partition_csv(std::istream& in) {
    const auto t = csv::read(in);
    const auto nc = t.column("node"), cc = t.column("cluster");
    std::vector<std::string> nodes, clusters;
    for (const auto& row : t.rows) {
        nodes.emplace_back(csv::trim(row[nc]));
        clusters.emplace_back(csv::trim(row[cc]));
    }
    return make_partition(std::move(nodes), clusters);
}

Partition read_partition_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_partition_csv(in);
}

}  // namespace attachnet
