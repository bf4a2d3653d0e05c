#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace attachnet {

using Arc = std::pair<int, int>;  // (from, to) node indices

// Directed acyclic graph over named nodes. Node order is fixed at construction
// and defines "item order" for every deterministic traversal in the library.
class Dag {
public:
    Dag() = default;
    explicit Dag(std::vector<std::string> nodes);

    static Dag from_arcs(std::vector<std::string> nodes, const std::vector<Arc>& arcs);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int v) const { return names_[static_cast<std::size_t>(v)]; }
    std::optional<int> find(std::string_view name) const;
    int index_of(std::string_view name) const;  // throws ValidationError

    bool has_arc(int from, int to) const;
    // Throws ValidationError on self-loops, duplicates and arcs that would close a cycle.
    void add_arc(int from, int to);
    void add_arc(std::string_view from, std::string_view to) { add_arc(index_of(from), index_of(to)); }
    void remove_arc(int from, int to);
    void reverse_arc(int from, int to);

    const std::vector<int>& parents(int v) const { return parents_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& children(int v) const { return children_[static_cast<std::size_t>(v)]; }
    std::size_t in_degree(int v) const { return parents(v).size(); }
    std::size_t out_degree(int v) const { return children(v).size(); }

    std::size_t arc_count() const { return arc_count_; }
    // Sorted by (from, to).
    std::vector<Arc> arcs() const;

    // True if a directed path from -> ... -> to exists (from == to counts).
    bool reaches(int from, int to) const;
    // Kahn's algorithm, always taking the smallest ready index.
    std::vector<int> topological_order() const;
    std::vector<bool> descendants_of(int v) const;  // includes v
    std::vector<bool> ancestors_of(int v) const;    // includes v

    friend bool operator==(const Dag&, const Dag&) = default;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> children_;
    std::size_t arc_count_ = 0;
};

struct RootsAndTerminals {
    std::vector<std::string> roots;      // in-degree 0
    std::vector<std::string> terminals;  // out-degree 0
};

RootsAndTerminals roots_and_terminals(const Dag& dag);

// Completed partially directed graph of the Markov equivalence class: arcs
// that every member orients the same way, plus reversible (undirected) pairs.
struct Cpdag {
    std::vector<Arc> compelled;
    std::vector<Arc> reversible;  // stored with first < second
};

Cpdag to_cpdag(const Dag& dag);

}  // namespace attachnet
