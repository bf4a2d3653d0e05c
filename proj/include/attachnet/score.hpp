#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "attachnet/dag.hpp"
#include "attachnet/ingest.hpp"

namespace attachnet {

// Mean and covariance with denominator n (maximum-likelihood convention),
// computed in two passes.
struct SufficientStats {
    std::size_t n = 0;
    std::vector<std::string> names;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    std::size_t dimension() const { return names.size(); }
};

// Throws ValidationError when n < 2 or any value is missing.
SufficientStats sufficient_stats(const ResponseTable& table);
SufficientStats sufficient_stats(const Eigen::MatrixXd& data, std::vector<std::string> names);

enum class ScoreKind { bic, aic, loglik };

struct ScoreOptions {
    ScoreKind kind = ScoreKind::bic;
    // Retry singular parent covariance with a 1e-8 ridge; if disabled, a
    // singular system throws NumericError instead.
    bool ridge_fallback = true;
};

// Least-squares regression of one node on a parent set, expressed through the
// covariance matrix.
struct NodeRegression {
    Eigen::VectorXd coefficients;  // aligned with the parent list
    double intercept = 0.0;
    double residual_variance = 0.0;  // ML (denominator n)
    bool ridge_used = false;
    bool singular = false;  // still singular after the ridge retry
};

NodeRegression regress_node(const SufficientStats& stats, int node, std::span<const int> parents,
                            bool ridge_fallback = true);

// Gaussian log-likelihood of `node` given `parents` at the ML estimates, minus
// the penalty for (|parents| + 2) free parameters. Larger is better; returns
// -infinity for parent sets that stay singular after the ridge retry.
double local_score(int node, std::span<const int> parents, const SufficientStats& stats,
                   const ScoreOptions& options = {});

double graph_score(const Dag& dag, const SufficientStats& stats, const ScoreOptions& options = {});

}  // namespace attachnet
