#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "attachnet/diagnostics.hpp"
#include "attachnet/error.hpp"
#include "attachnet/parallel.hpp"
#include "attachnet/random.hpp"
#include "attachnet/structure.hpp"

namespace attachnet {

ArcStrengthTable::ArcStrengthTable(std::vector<std::string> nodes, int replicates)
    : nodes_(std::move(nodes)), replicates_(replicates) {
    if (replicates < 0) throw ValidationError("replicate count must be >= 0");
    pair_count_.assign(nodes_.size() * nodes_.size(), 0.0);
    dir_count_.assign(nodes_.size() * nodes_.size(), 0.0);
}

double ArcStrengthTable::strength(int u, int v) const {
    if (replicates_ == 0) return 0.0;
    return pair_count_[idx(u, v)] / replicates_;
}

double ArcStrengthTable::direction(int u, int v) const {
    const double pair = pair_count_[idx(u, v)];
    return pair > 0.0 ? dir_count_[idx(u, v)] / pair : 0.0;
}

void ArcStrengthTable::tally_directed(int from, int to) {
    pair_count_[idx(from, to)] += 1.0;
    pair_count_[idx(to, from)] += 1.0;
    dir_count_[idx(from, to)] += 1.0;
}

void ArcStrengthTable::tally_undirected(int u, int v) {
    pair_count_[idx(u, v)] += 1.0;
    pair_count_[idx(v, u)] += 1.0;
    dir_count_[idx(u, v)] += 0.5;
    dir_count_[idx(v, u)] += 0.5;
}

void ArcStrengthTable::merge(const ArcStrengthTable& other) {
    if (other.nodes_ != nodes_) throw ValidationError("cannot merge strength tables over different nodes");
    replicates_ += other.replicates_;
    for (std::size_t i = 0; i < pair_count_.size(); ++i) {
        pair_count_[i] += other.pair_count_[i];
        dir_count_[i] += other.dir_count_[i];
    }
}

ArcStrengthTable ArcStrengthTable::from_values(std::vector<std::string> nodes,
                                               const std::vector<std::vector<double>>& strength,
                                               const std::vector<std::vector<double>>& direction) {
    const std::size_t n = nodes.size();
    if (strength.size() != n || direction.size() != n)
        throw ValidationError("strength/direction matrices do not match the node count");
    // A single pseudo-replicate with fractional counts reproduces the values exactly.
    ArcStrengthTable t(std::move(nodes), 1);
    for (std::size_t u = 0; u < n; ++u) {
        if (strength[u].size() != n || direction[u].size() != n)
            throw ValidationError("strength/direction matrices must be square");
        for (std::size_t v = 0; v < n; ++v) {
            const double s = strength[u][v], d = direction[u][v];
            if (!(s >= 0.0 && s <= 1.0) || !(d >= 0.0 && d <= 1.0))
                throw ValidationError("strength and direction must lie in [0, 1]");
            if (u == v) continue;
            t.pair_count_[u * n + v] = s;
            t.dir_count_[u * n + v] = s * d;
        }
    }
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (std::abs(t.pair_count_[u * n + v] - t.pair_count_[v * n + u]) > 1e-9)
                throw ValidationError("strength must be symmetric: " + t.nodes_[u] + "/" + t.nodes_[v]);
    return t;
}

std::vector<ArcStrengthTable::Row> ArcStrengthTable::rows() const {
    std::vector<Row> out;
    const int n = static_cast<int>(nodes_.size());
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && pair_count_[idx(u, v)] > 0.0)
                out.push_back({nodes_[static_cast<std::size_t>(u)], nodes_[static_cast<std::size_t>(v)], strength(u, v),
                               direction(u, v)});
    return out;
}

ArcStrengthTable bootstrap_strengths(const ResponseTable& table, const BootstrapOptions& options,
                                     const SearchConfig& cfg) {
    cfg.validate();
    if (options.replicates < 1) throw ValidationError("bootstrap needs at least one replicate");
    if (options.sample_size < 2) throw ValidationError("bootstrap sample size must be >= 2");
    if (table.row_count() < 1) throw ValidationError("bootstrap needs a non-empty table");
    if (!table.complete()) throw ValidationError("bootstrap needs a complete response table");

    const std::size_t items = table.item_count();
    const std::size_t m = options.sample_size;
    std::vector<Dag> learned(static_cast<std::size_t>(options.replicates));

    parallel_for(learned.size(), options.threads, [&](std::size_t r) {
        Rng rng(derive_seed(cfg.seed, {r, 0}));
        Eigen::MatrixXd sample(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(items));
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t row = static_cast<std::size_t>(rng.below(table.row_count()));
            for (std::size_t j = 0; j < items; ++j)
                sample(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = table.at(row, j);
        }
        SearchConfig local = cfg;
        local.seed = derive_seed(cfg.seed, {r, 1});
        learned[r] = tabu_search(sufficient_stats(sample, table.items()), local).dag;
    });

    ArcStrengthTable out(table.items(), options.replicates);
    for (const auto& g : learned) {
        if (options.cpdag) {
            const Cpdag eq = to_cpdag(g);
            for (auto [u, v] : eq.compelled) out.tally_directed(u, v);
            for (auto [u, v] : eq.reversible) out.tally_undirected(u, v);
        } else {
            for (auto [u, v] : g.arcs()) out.tally_directed(u, v);
        }
    }
    return out;
}

namespace {

struct WeightedArc {
    int from;
    int to;
    double weight;
};

// Tarjan's strongly connected components; returns a component id per node.
std::vector<int> strong_components(int n, const std::vector<WeightedArc>& arcs) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& a : arcs) adj[static_cast<std::size_t>(a.from)].push_back(a.to);
    std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
        comp(static_cast<std::size_t>(n), -1);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    int counter = 0, components = 0;
    std::function<void(int)> visit = [&](int v) {
        const auto sv = static_cast<std::size_t>(v);
        index[sv] = low[sv] = counter++;
        stack.push_back(v);
        on_stack[sv] = 1;
        for (int w : adj[sv]) {
            const auto sw = static_cast<std::size_t>(w);
            if (index[sw] < 0) {
                visit(w);
                low[sv] = std::min(low[sv], low[sw]);
            } else if (on_stack[sw]) {
                low[sv] = std::min(low[sv], index[sw]);
            }
        }
        if (low[sv] == index[sv]) {
            int w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[static_cast<std::size_t>(w)] = 0;
                comp[static_cast<std::size_t>(w)] = components;
            } while (w != v);
            ++components;
        }
    };
    for (int v = 0; v < n; ++v)
        if (index[static_cast<std::size_t>(v)] < 0) visit(v);
    return comp;
}

}  // namespace

AveragedNetwork average_network(const ArcStrengthTable& strengths, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ValidationError("threshold must lie in (0, 1]");
    const auto& nodes = strengths.nodes();
    const int n = static_cast<int>(nodes.size());
    AveragedNetwork out;
    std::vector<WeightedArc> arcs;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const double s = strengths.strength(u, v);
            if (s < threshold || s == 0.0) continue;
            const double du = strengths.direction(u, v), dv = strengths.direction(v, u);
            if (std::abs(du - dv) <= 1e-12) {
                out.undirected.emplace_back(nodes[static_cast<std::size_t>(u)], nodes[static_cast<std::size_t>(v)]);
            } else if (du > dv) {
                arcs.push_back({u, v, s * du});
            } else {
                arcs.push_back({v, u, s * dv});
            }
        }
    }

    for (;;) {
        const auto comp = strong_components(n, arcs);
        std::vector<int> comp_size(static_cast<std::size_t>(n), 0);
        for (int c : comp) ++comp_size[static_cast<std::size_t>(c)];
        auto weakest = arcs.end();
        for (auto it = arcs.begin(); it != arcs.end(); ++it) {
            const int c = comp[static_cast<std::size_t>(it->from)];
            if (c != comp[static_cast<std::size_t>(it->to)] || comp_size[static_cast<std::size_t>(c)] < 2) continue;
            if (weakest == arcs.end() || it->weight < weakest->weight ||
                (it->weight == weakest->weight && std::pair(it->from, it->to) < std::pair(weakest->from, weakest->to)))
                weakest = it;
        }
        if (weakest == arcs.end()) break;
        DroppedArc d{nodes[static_cast<std::size_t>(weakest->from)], nodes[static_cast<std::size_t>(weakest->to)],
                     weakest->weight};
        warn("dropping arc " + d.from + " -> " + d.to + " (weight " + std::to_string(d.weight) + ") to break a cycle");
        out.dropped.push_back(std::move(d));
        arcs.erase(weakest);
    }

    out.dag = Dag(nodes);
    std::sort(arcs.begin(), arcs.end(),
              [](const WeightedArc& a, const WeightedArc& b) { return std::pair(a.from, a.to) < std::pair(b.from, b.to); });
    for (const auto& a : arcs) out.dag.add_arc(a.from, a.to);
    return out;
}

StabilityReport stability_curve(const ResponseTable& table, const std::vector<int>& epochs, int repeats,
                                const BootstrapOptions& options, const SearchConfig& cfg, double threshold) {
    if (epochs.empty()) throw ValidationError("stability curve needs at least one replicate count");
    if (repeats < 1) throw ValidationError("stability curve needs at least one repeat");
    StabilityReport report;
    for (int reps : epochs) {
        if (reps < 1) throw ValidationError("replicate counts must be >= 1");
        std::vector<double> directed, undirected;
        for (int k = 0; k < repeats; ++k) {
            BootstrapOptions opts = options;
            opts.replicates = reps;
            SearchConfig local = cfg;
            local.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(reps), static_cast<std::uint64_t>(k)});
            const auto net = average_network(bootstrap_strengths(table, opts, local), threshold);
            directed.push_back(static_cast<double>(net.dag.arc_count()));
            undirected.push_back(static_cast<double>(net.undirected.size()));
        }
        auto summary = [](const std::vector<double>& xs) {
            const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
            double ss = 0.0;
            for (double x : xs) ss += (x - mean) * (x - mean);
            const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
            return std::pair(mean, sd);
        };
        const auto [dm, dsd] = summary(directed);
        const auto [um, usd] = summary(undirected);
        report.points.push_back({reps, dm, dsd, um, usd});
    }
    return report;
}

}  // namespace attachnet
