#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "attachnet/dag.hpp"
#include "attachnet/ingest.hpp"

namespace attachnet {

struct NodeParams {
    double intercept = 0.0;
    double residual_sd = 0.0;
    std::vector<int> parents;          // sorted, matches Dag::parents
    std::vector<double> coefficients;  // aligned with parents
};

// Linear-Gaussian parameters: x_v = intercept_v + sum_p c(p,v) x_p + e_v.
class GaussianBnParams {
public:
    GaussianBnParams() = default;
    explicit GaussianBnParams(const Dag& dag);  // zero coefficients, unit sd

    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return nodes_.size(); }
    const NodeParams& node(int v) const { return nodes_[static_cast<std::size_t>(v)]; }
    NodeParams& node(int v) { return nodes_[static_cast<std::size_t>(v)]; }

    // Throws ValidationError when the arc is not present.
    double coefficient(int from, int to) const;
    std::optional<double> find_coefficient(int from, int to) const;
    void set_coefficient(int from, int to, double value);

    // Every (from, to, coefficient), sorted by (from, to).
    struct Entry {
        int from;
        int to;
        double coefficient;
    };
    std::vector<Entry> entries() const;

    // Parent sets and names agree with the graph; every value finite.
    void check_consistent(const Dag& dag) const;

private:
    std::vector<std::string> names_;
    std::vector<NodeParams> nodes_;
};

// A structure plus its parameters, the unit most analyses consume.
struct Model {
    Dag dag;
    GaussianBnParams params;
};

enum class SdDenominator { ml, unbiased };

struct FitOptions {
    SdDenominator sd = SdDenominator::ml;
    unsigned threads = 0;
};

// Per-node least squares on the parent columns with an intercept. Ridge
// fallback on rank-deficient designs emits a warning.
GaussianBnParams fit_mle(const Dag& dag, const ResponseTable& table, const FitOptions& options = {});

enum class Polarity { positive, negative };

std::string_view to_string(Polarity p);

struct InterceptRow {
    std::string item;
    double intercept;
    double residual_sd;
    Polarity polarity;
};

// Sorted by intercept, highest first (ties by item). The polarity map must
// cover exactly the model's items.
std::vector<InterceptRow> intercept_report(const GaussianBnParams& params,
                                           const std::map<std::string, Polarity>& polarity);

}  // namespace attachnet
