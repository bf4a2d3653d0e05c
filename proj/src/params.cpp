#include "attachnet/params.hpp"

#include <algorithm>
#include <cmath>

#include "attachnet/diagnostics.hpp"
#include "attachnet/error.hpp"
#include "attachnet/parallel.hpp"
#include "attachnet/score.hpp"

namespace attachnet {

GaussianBnParams::GaussianBnParams(const Dag& dag) : names_(dag.names()), nodes_(dag.size()) {
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        nodes_[v].parents = dag.parents(static_cast<int>(v));
        nodes_[v].coefficients.assign(nodes_[v].parents.size(), 0.0);
        nodes_[v].residual_sd = 1.0;
    }
}

std::optional<double> GaussianBnParams::find_coefficient(int from, int to) const {
    const auto& n = node(to);
    auto it = std::lower_bound(n.parents.begin(), n.parents.end(), from);
    if (it == n.parents.end() || *it != from) return std::nullopt;
    return n.coefficients[static_cast<std::size_t>(it - n.parents.begin())];
}

double GaussianBnParams::coefficient(int from, int to) const {
    if (auto c = find_coefficient(from, to)) return *c;
    throw ValidationError("no arc " + names_[static_cast<std::size_t>(from)] + " -> " +
                          names_[static_cast<std::size_t>(to)]);
}

void GaussianBnParams::set_coefficient(int from, int to, double value) {
    auto& n = node(to);
    auto it = std::lower_bound(n.parents.begin(), n.parents.end(), from);
    if (it == n.parents.end() || *it != from)
        throw ValidationError("no arc " + names_[static_cast<std::size_t>(from)] + " -> " +
                              names_[static_cast<std::size_t>(to)]);
    n.coefficients[static_cast<std::size_t>(it - n.parents.begin())] = value;
}

std::vector<GaussianBnParams::Entry> GaussianBnParams::entries() const {
    std::vector<Entry> out;
    for (std::size_t v = 0; v < nodes_.size(); ++v)
        for (std::size_t j = 0; j < nodes_[v].parents.size(); ++j)
            out.push_back({nodes_[v].parents[j], static_cast<int>(v), nodes_[v].coefficients[j]});
    std::sort(out.begin(), out.end(),
              [](const Entry& a, const Entry& b) { return std::pair(a.from, a.to) < std::pair(b.from, b.to); });
    return out;
}

void GaussianBnParams::check_consistent(const Dag& dag) const {
    if (dag.names() != names_) throw ValidationError("parameters and graph have different nodes");
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        const auto& n = nodes_[v];
        if (n.parents != dag.parents(static_cast<int>(v)) || n.coefficients.size() != n.parents.size())
            throw ValidationError("parameters for " + names_[v] + " do not match its parent set");
        if (!std::isfinite(n.intercept) || !std::isfinite(n.residual_sd) || n.residual_sd < 0.0)
            throw ValidationError("non-finite intercept or residual sd for " + names_[v]);
        for (double c : n.coefficients)
            if (!std::isfinite(c)) throw ValidationError("non-finite coefficient into " + names_[v]);
    }
}

GaussianBnParams fit_mle(const Dag& dag, const ResponseTable& table, const FitOptions& options) {
    if (dag.names() != table.items()) throw ValidationError("graph nodes and table items differ");
    if (!table.complete()) throw ValidationError("fit_mle needs complete data");
    std::size_t max_parents = 0;
    for (int v = 0; v < static_cast<int>(dag.size()); ++v) max_parents = std::max(max_parents, dag.in_degree(v));
    const std::size_t n = table.row_count();
    if (n <= max_parents + 1)
        throw ValidationError("need more than " + std::to_string(max_parents + 1) + " rows, got " + std::to_string(n));

    const SufficientStats stats = sufficient_stats(table);
    GaussianBnParams params(dag);
    parallel_for(dag.size(), options.threads, [&](std::size_t i) {
        const int v = static_cast<int>(i);
        const auto& parents = dag.parents(v);
        const NodeRegression reg = regress_node(stats, v, parents, true);
        if (reg.ridge_used) warn("rank-deficient design for " + dag.name(v) + "; using ridge 1e-8");
        auto& out = params.node(v);
        out.intercept = reg.intercept;
        for (std::size_t j = 0; j < parents.size(); ++j) out.coefficients[j] = reg.coefficients(static_cast<Eigen::Index>(j));
        double var = std::max(reg.residual_variance, 0.0);
        if (options.sd == SdDenominator::unbiased)
            var *= static_cast<double>(n) / static_cast<double>(n - parents.size() - 1);
        out.residual_sd = std::sqrt(var);
    });
    return params;
}

std::string_view to_string(Polarity p) { return p == Polarity::positive ? "positive" : "negative"; }

std::vector<InterceptRow> intercept_report(const GaussianBnParams& params,
                                           const std::map<std::string, Polarity>& polarity) {
    const auto& names = params.names();
    for (const auto& [item, _] : polarity)
        if (std::find(names.begin(), names.end(), item) == names.end())
            throw ValidationError("polarity table lists unknown item " + item);
    std::vector<InterceptRow> rows;
    for (std::size_t v = 0; v < names.size(); ++v) {
        auto it = polarity.find(names[v]);
        if (it == polarity.end()) throw ValidationError("no polarity for item " + names[v]);
        const auto& n = params.node(static_cast<int>(v));
        rows.push_back({names[v], n.intercept, n.residual_sd, it->second});
    }
    std::sort(rows.begin(), rows.end(), [](const InterceptRow& a, const InterceptRow& b) {
        return a.intercept != b.intercept ? a.intercept > b.intercept : a.item < b.item;
    });
    return rows;
}

}  // namespace attachnet
