#include "attachnet/score.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "attachnet/error.hpp"

namespace attachnet {

SufficientStats sufficient_stats(const Eigen::MatrixXd& data, std::vector<std::string> names) {
    const auto n = static_cast<std::size_t>(data.rows());
    if (n < 2) throw ValidationError("sufficient statistics need at least 2 rows, got " + std::to_string(n));
    if (static_cast<std::size_t>(data.cols()) != names.size()) throw ValidationError("column/name count mismatch");
    if (!data.allFinite()) throw ValidationError("data contains missing or non-finite values");

    SufficientStats s;
    s.n = n;
    s.names = std::move(names);
    s.mean = data.colwise().mean().transpose();
    const Eigen::MatrixXd centered = data.rowwise() - s.mean.transpose();
    s.cov = (centered.transpose() * centered) / static_cast<double>(n);
    s.cov = 0.5 * (s.cov + s.cov.transpose());
    return s;
}

SufficientStats sufficient_stats(const ResponseTable& table) {
    const auto n = table.row_count(), m = table.item_count();
    Eigen::MatrixXd data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < m; ++i) data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = table.at(r, i);
    return sufficient_stats(data, table.items());
}

NodeRegression regress_node(const SufficientStats& stats, int node, std::span<const int> parents,
                            bool ridge_fallback) {
    const auto k = static_cast<Eigen::Index>(parents.size());
    NodeRegression out;
    const double syy = stats.cov(node, node);
    if (k == 0) {
        out.coefficients.resize(0);
        out.intercept = stats.mean(node);
        out.residual_variance = syy;
        return out;
    }
    Eigen::MatrixXd spp(k, k);
    Eigen::VectorXd spy(k);
    Eigen::VectorXd mp(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const int pi = parents[static_cast<std::size_t>(i)];
        if (pi == node) throw ValidationError("node " + stats.names[static_cast<std::size_t>(node)] + " listed as its own parent");
        spy(i) = stats.cov(pi, node);
        mp(i) = stats.mean(pi);
        for (Eigen::Index j = 0; j < k; ++j) spp(i, j) = stats.cov(pi, parents[static_cast<std::size_t>(j)]);
    }

    auto solve = [&](const Eigen::MatrixXd& a) -> std::optional<Eigen::VectorXd> {
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() != Eigen::Success || llt.rcond() < 1e-12) return std::nullopt;
        return llt.solve(spy);
    };

    auto beta = solve(spp);
    if (!beta) {
        if (!ridge_fallback)
            throw NumericError("singular parent covariance for node " + stats.names[static_cast<std::size_t>(node)]);
        out.ridge_used = true;
        beta = solve(spp + 1e-8 * Eigen::MatrixXd::Identity(k, k));
        if (!beta) {
            out.singular = true;
            out.coefficients = Eigen::VectorXd::Zero(k);
            out.intercept = stats.mean(node);
            out.residual_variance = syy;
            return out;
        }
    }
    out.coefficients = *beta;
    out.intercept = stats.mean(node) - mp.dot(*beta);
    // Residual variance of the fitted linear predictor: Syy - 2 b'Spy + b'Spp b,
    // which equals Syy - b'Spy at the exact solution and stays correct under the ridge.
    out.residual_variance = syy - 2.0 * beta->dot(spy) + beta->dot(spp * *beta);
    return out;
}

double local_score(int node, std::span<const int> parents, const SufficientStats& stats, const ScoreOptions& options) {
    const auto reg = regress_node(stats, node, parents, options.ridge_fallback);
    const double ninf = -std::numeric_limits<double>::infinity();
    if (reg.singular || !(reg.residual_variance > 0.0)) return ninf;

    const double n = static_cast<double>(stats.n);
    const double loglik = 0.5 * n * (-std::log(2.0 * std::numbers::pi * reg.residual_variance) - 1.0);
    const double params = static_cast<double>(parents.size()) + 2.0;
    switch (options.kind) {
        case ScoreKind::bic: return loglik - 0.5 * params * std::log(n);
        case ScoreKind::aic: return loglik - params;
        case ScoreKind::loglik: return loglik;
    }
    return loglik;
}

double graph_score(const Dag& dag, const SufficientStats& stats, const ScoreOptions& options) {
    if (dag.size() != stats.dimension()) throw ValidationError("graph and statistics have different node counts");
    double total = 0.0;
    for (std::size_t v = 0; v < dag.size(); ++v) {
        const auto& pa = dag.parents(static_cast<int>(v));
        total += local_score(static_cast<int>(v), pa, stats, options);
    }
    return total;
}

}  // namespace attachnet
