#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "attachnet/analytics.hpp"
#include "attachnet/dag.hpp"
#include "attachnet/params.hpp"

namespace attachnet {

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

struct InfluencePath {
    std::vector<int> nodes;  // from ... to
    double product = 1.0;
};

// All directed paths from -> to, depth-first with children in node order.
// Throws PathLimitError when more than `cap` paths exist.
std::vector<std::vector<int>> enumerate_paths(const Dag& dag, int from, int to, std::size_t cap = kDefaultPathCap);

// Product of coefficients along consecutive arcs; throws ValidationError on a
// missing arc.
double path_product(const std::vector<int>& path, const GaussianBnParams& params);

// d x_to / d x_from of the linear system: sum of path products, computed by
// dynamic programming in topological order.
double total_influence(const Dag& dag, const GaussianBnParams& params, int from, int to);

// The k paths with largest |product|; ties by lexicographic node sequence.
std::vector<InfluencePath> top_paths(const Dag& dag, const GaussianBnParams& params, int from, int to, std::size_t k,
                                     std::size_t cap = kDefaultPathCap);

// Sum of |coefficient| over arcs between clusters, keyed by (from label, to label).
// Pairs without crossing arcs are absent.
using CouplingMatrix = std::map<std::pair<std::string, std::string>, double>;

CouplingMatrix cluster_coupling(const Dag& dag, const GaussianBnParams& params, const Partition& partition);

// Median of |coefficient| over all arcs; throws ValidationError when there are none.
double median_abs_coefficient(const GaussianBnParams& params);

std::string format_path(const Dag& dag, const std::vector<int>& path);

// source,target,total,path_rank,path,product (one row per listed path, or a
// single row with empty path columns when none are listed).
void write_influence_csv(std::ostream& out, const Dag& dag, int from, int to, double total,
                         const std::vector<InfluencePath>& paths);

}  // namespace attachnet
