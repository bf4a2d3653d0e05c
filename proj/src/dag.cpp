#include "attachnet/dag.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "attachnet/error.hpp"

namespace attachnet {
namespace {

void insert_sorted(std::vector<int>& v, int x) { v.insert(std::lower_bound(v.begin(), v.end(), x), x); }

void erase_sorted(std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) v.erase(it);
}

}  // namespace

Dag::Dag(std::vector<std::string> nodes)
    : names_(std::move(nodes)), parents_(names_.size()), children_(names_.size()) {
    std::set<std::string> seen;
    for (const auto& n : names_)
        if (!seen.insert(n).second) throw ValidationError("duplicate node name " + n);
}

Dag Dag::from_arcs(std::vector<std::string> nodes, const std::vector<Arc>& arcs) {
    Dag d(std::move(nodes));
    for (auto [u, v] : arcs) d.add_arc(u, v);
    return d;
}

std::optional<int> Dag::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

int Dag::index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw ValidationError("unknown node " + std::string(name));
}

bool Dag::has_arc(int from, int to) const {
    const auto& ch = children(from);
    return std::binary_search(ch.begin(), ch.end(), to);
}

void Dag::add_arc(int from, int to) {
    const int n = static_cast<int>(size());
    if (from < 0 || to < 0 || from >= n || to >= n) throw ValidationError("arc endpoint out of range");
    if (from == to) throw ValidationError("self-loop on " + name(from));
    if (has_arc(from, to)) throw ValidationError("duplicate arc " + name(from) + "->" + name(to));
    if (reaches(to, from)) throw ValidationError("arc " + name(from) + "->" + name(to) + " would create a cycle");
    insert_sorted(children_[static_cast<std::size_t>(from)], to);
    insert_sorted(parents_[static_cast<std::size_t>(to)], from);
    ++arc_count_;
}

void Dag::remove_arc(int from, int to) {
    if (!has_arc(from, to)) throw ValidationError("no arc " + name(from) + "->" + name(to));
    erase_sorted(children_[static_cast<std::size_t>(from)], to);
    erase_sorted(parents_[static_cast<std::size_t>(to)], from);
    --arc_count_;
}

void Dag::reverse_arc(int from, int to) {
    remove_arc(from, to);
    try {
        add_arc(to, from);
    } catch (...) {
        add_arc(from, to);
        throw;
    }
}

std::vector<Arc> Dag::arcs() const {
    std::vector<Arc> out;
    out.reserve(arc_count_);
    for (std::size_t u = 0; u < size(); ++u)
        for (int v : children_[u]) out.emplace_back(static_cast<int>(u), v);
    return out;
}

bool Dag::reaches(int from, int to) const {
    if (from == to) return true;
    std::vector<bool> seen(size(), false);
    std::vector<int> stack{from};
    seen[static_cast<std::size_t>(from)] = true;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : children(u)) {
            if (v == to) return true;
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = true;
                stack.push_back(v);
            }
        }
    }
    return false;
}

std::vector<int> Dag::topological_order() const {
    std::vector<std::size_t> indeg(size());
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (std::size_t v = 0; v < size(); ++v) {
        indeg[v] = parents_[v].size();
        if (indeg[v] == 0) ready.push(static_cast<int>(v));
    }
    std::vector<int> order;
    order.reserve(size());
    while (!ready.empty()) {
        const int u = ready.top();
        ready.pop();
        order.push_back(u);
        for (int v : children(u))
            if (--indeg[static_cast<std::size_t>(v)] == 0) ready.push(v);
    }
    if (order.size() != size()) throw NumericError("graph contains a cycle");
    return order;
}

namespace {

std::vector<bool> closure(const Dag& dag, int start, bool forward) {
    std::vector<bool> seen(dag.size(), false);
    std::vector<int> stack{start};
    seen[static_cast<std::size_t>(start)] = true;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : forward ? dag.children(u) : dag.parents(u))
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = true;
                stack.push_back(v);
            }
    }
    return seen;
}

}  // namespace

std::vector<bool> Dag::descendants_of(int v) const { return closure(*this, v, true); }
std::vector<bool> Dag::ancestors_of(int v) const { return closure(*this, v, false); }

RootsAndTerminals roots_and_terminals(const Dag& dag) {
    RootsAndTerminals rt;
    for (std::size_t v = 0; v < dag.size(); ++v) {
        if (dag.in_degree(static_cast<int>(v)) == 0) rt.roots.push_back(dag.names()[v]);
        if (dag.out_degree(static_cast<int>(v)) == 0) rt.terminals.push_back(dag.names()[v]);
    }
    return rt;
}

Cpdag to_cpdag(const Dag& dag) {
    // Start from the skeleton, orient v-structures, then close under Meek's
    // rules R1-R3 (R4 is never needed when starting from a DAG's v-structures).
    const std::size_t n = dag.size();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));  // undirected adjacency
    std::vector<std::vector<char>> dir(n, std::vector<char>(n, 0));  // dir[u][v]: oriented u->v
    for (auto [u, v] : dag.arcs()) adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] =
                                       adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;

    for (std::size_t c = 0; c < n; ++c) {
        const auto& pa = dag.parents(static_cast<int>(c));
        for (std::size_t i = 0; i < pa.size(); ++i)
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                const auto a = static_cast<std::size_t>(pa[i]), b = static_cast<std::size_t>(pa[j]);
                if (!adj[a][b]) dir[a][c] = dir[b][c] = 1;
            }
    }
    auto undirected = [&](std::size_t a, std::size_t b) { return adj[a][b] && !dir[a][b] && !dir[b][a]; };

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                if (a == b || !undirected(a, b)) continue;
                bool orient = false;
                for (std::size_t c = 0; c < n && !orient; ++c) {
                    if (c == a || c == b) continue;
                    // R1: c -> a - b, c and b non-adjacent  =>  a -> b
                    if (dir[c][a] && !adj[c][b]) orient = true;
                    // R2: a -> c -> b  =>  a -> b
                    if (dir[a][c] && dir[c][b]) orient = true;
                }
                // R3: a - c -> b, a - d -> b, c and d non-adjacent  =>  a -> b
                for (std::size_t c = 0; c < n && !orient; ++c) {
                    if (c == a || c == b || !undirected(a, c) || !dir[c][b]) continue;
                    for (std::size_t d = c + 1; d < n && !orient; ++d) {
                        if (d == a || d == b || !undirected(a, d) || !dir[d][b]) continue;
                        if (!adj[c][d]) orient = true;
                    }
                }
                if (orient) {
                    dir[a][b] = 1;
                    changed = true;
                }
            }
    }

    Cpdag out;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (dir[a][b]) out.compelled.emplace_back(static_cast<int>(a), static_cast<int>(b));
            else if (a < b && undirected(a, b)) out.reversible.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    return out;
}

}  // namespace attachnet
