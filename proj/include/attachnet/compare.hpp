#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "attachnet/params.hpp"

namespace attachnet {

// Per-item factor vectors (rows follow `items`).
struct FactorTable {
    std::vector<std::string> items;
    Eigen::MatrixXd values;  // items x factors

    std::size_t dimension() const { return static_cast<std::size_t>(values.cols()); }
};

// item,f1,f2[,...]
FactorTable read_factor_csv(std::istream& in);
FactorTable read_factor_file(const std::filesystem::path& path);
void write_factor_csv(std::ostream& out, const FactorTable& t, const std::string& prefix = "f");

struct KMeansResult {
    std::vector<int> assignment;  // per item, clusters numbered by first appearance
    Eigen::MatrixXd centers;      // k x dims, row c = cluster c
    double total_within_ss = 0.0;
    std::uint64_t best_seed = 0;
};

// One Lloyd run from k distinct items drawn with `seed`.
KMeansResult kmeans_lloyd(const Eigen::MatrixXd& data, int k, std::uint64_t seed, int max_iter = 100);

// Lloyd runs for every seed in [seed_lo, seed_hi]; keeps the minimum
// (total_within_ss, seed).
KMeansResult kmeans_best_seed(const FactorTable& data, int k, std::uint64_t seed_lo = 1, std::uint64_t seed_hi = 4000,
                              unsigned threads = 0);

struct PcaResult {
    FactorTable scores;                 // items x dims
    Eigen::MatrixXd components;         // factors x dims (columns are loadings)
    std::vector<double> variance_ratio; // per retained component
};

PcaResult pca_project(const FactorTable& data, int dims);

struct Ellipse {
    Eigen::Vector2d center;
    Eigen::Vector2d axes;  // semi-axes, major first
    double angle = 0.0;    // radians, of the major axis from the x axis, in [0, pi)
};

// Sample mean and covariance scaled by sqrt(2 F(level; 2, n-1)).
Ellipse confidence_ellipse(const std::vector<Eigen::Vector2d>& points, double level);

// Points on the ellipse boundary for plotting.
std::vector<Eigen::Vector2d> ellipse_outline(const Ellipse& e, int segments = 100);

struct TestResult {
    double statistic;
    double p;
};

// t = r sqrt(df / (1 - r^2)), two-tailed Student-t p.
TestResult pearson_significance(double r, int df);

// U of sample a (midranks), two-tailed p. Exact null distribution when
// |a| * |b| <= 400, otherwise normal approximation with tie and continuity
// corrections.
TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);

using ItemPair = std::pair<std::string, std::string>;  // canonical: first < second

ItemPair make_pair_key(std::string a, std::string b);

using EdgeWeightSet = std::map<ItemPair, double>;

enum class FoldMode { signed_sum, absolute };

// Directed coefficients folded to unordered pairs: c(u->v) + c(v->u), or its
// absolute value.
EdgeWeightSet fold_coefficients(const Model& model, FoldMode mode = FoldMode::absolute);

// Keeps pairs whose both endpoints are in `items`.
EdgeWeightSet restrict_to(const EdgeWeightSet& set, const std::vector<std::string>& items);

// a,b,weight; `rename` maps raw ids (e.g. external item numbers) to items,
// pairs with unmapped ids are dropped.
EdgeWeightSet read_edge_csv(std::istream& in, const std::map<std::string, std::string>& rename = {});
EdgeWeightSet read_edge_file(const std::filesystem::path& path, const std::map<std::string, std::string>& rename = {});

// from_column,to_column two-column map file (header required).
std::map<std::string, std::string> read_item_map_file(const std::filesystem::path& path);

enum class PairMode { union_, intersection };

struct EdgeCorrelation {
    std::size_t n_pairs = 0;
    double r = 0.0;
    double t = 0.0;
    double p = 1.0;
};

// Zero weights count as absent. Union imputes 0 for a missing side;
// intersection keeps pairs weighted in both. df = n_pairs - 2.
EdgeCorrelation edge_set_correlation(const EdgeWeightSet& ours, const EdgeWeightSet& theirs, PairMode mode);

double pearson_r(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace attachnet
