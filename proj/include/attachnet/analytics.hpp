#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "attachnet/dag.hpp"
#include "attachnet/params.hpp"

namespace attachnet {

// Assignment of every node to one cluster. Cluster ids are dense 0..k-1;
// labels[c] names cluster c ("C1", ...).
struct Partition {
    std::vector<std::string> nodes;
    std::vector<int> assignment;
    std::vector<std::string> labels;

    int cluster_count() const { return static_cast<int>(labels.size()); }
    std::vector<std::string> members(int cluster) const;
    const std::string& label_of(std::string_view node) const;

    // Same grouping of the same nodes, ignoring cluster ids and labels.
    bool same_grouping(const Partition& other) const;
};

// Builds a partition from per-node cluster names; ids follow first appearance
// in sorted label order.
Partition make_partition(std::vector<std::string> nodes, const std::vector<std::string>& cluster_names);

// Renames clusters to the labels of a reference partition over the same nodes,
// matching greedily by overlap. Unmatched clusters get fresh "C<k>" labels.
Partition relabel_like(const Partition& partition, const Partition& reference);

struct WalktrapResult {
    Partition partition;
    double modularity = 0.0;
    std::vector<double> modularity_trace;  // after 0, 1, ... merges
};

// Random-walk community detection on the undirected projection weighted by
// |coefficient|. The merge dendrogram is cut at its first maximum modularity.
WalktrapResult walktrap(const Dag& dag, const GaussianBnParams& params, int steps = 4);

inline Partition communities_walktrap(const Dag& dag, const GaussianBnParams& params, int steps = 4) {
    return walktrap(dag, params, steps).partition;
}

enum class CentralityKind { degree_in, degree_out, betweenness, pagerank };

std::string_view to_string(CentralityKind k);

struct CentralityVector {
    CentralityKind kind;
    std::vector<std::string> nodes;
    std::vector<double> values;

    // Node indices by decreasing value, ties by index.
    std::vector<int> ranking() const;
};

struct DegreeCentrality {
    CentralityVector in;
    CentralityVector out;
};

DegreeCentrality degree_centrality(const Dag& dag);

// Directed shortest-path betweenness with arc length 1/|coefficient|; zero
// coefficients exclude the arc (with a warning). Unnormalized.
CentralityVector betweenness(const Dag& dag, const GaussianBnParams& params);

// Weighted PageRank over |coefficient|; dangling nodes teleport uniformly.
CentralityVector pagerank(const Dag& dag, const GaussianBnParams& params, double damping = 0.85);

void write_centrality_csv(std::ostream& out, const CentralityVector& v);
void write_partition_csv(std::ostream& out, const Partition& p);
Partition read_partition_csv(std::istream& in);
Partition read_partition_file(const std::filesystem::path& path);

}  // namespace attachnet
