#include <cmath>
#include <numbers>

#include <boost/math/distributions/fisher_f.hpp>

#include "attachnet/compare.hpp"
#include "attachnet/diagnostics.hpp"
#include "attachnet/error.hpp"

namespace attachnet {

PcaResult pca_project(const FactorTable& data, int dims) {
    const auto n = data.values.rows(), p = data.values.cols();
    if (dims < 1 || dims > p) throw ValidationError("pca dims must lie in [1, " + std::to_string(p) + "]");
    if (n < 2) throw ValidationError("pca needs at least two items");
    const Eigen::RowVectorXd mean = data.values.colwise().mean();
    const Eigen::MatrixXd centered = data.values.rowwise() - mean;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::MatrixXd v = svd.matrixV().leftCols(dims);
    for (int c = 0; c < dims; ++c) {
        Eigen::Index arg;
        v.col(c).cwiseAbs().maxCoeff(&arg);
        if (v(arg, c) < 0) v.col(c) = -v.col(c);
    }
    const Eigen::VectorXd sv = svd.singularValues();
    const double total = sv.squaredNorm();
    PcaResult r;
    r.components = v;
    r.scores.items = data.items;
    r.scores.values = centered * v;
    for (int c = 0; c < dims; ++c) r.variance_ratio.push_back(total > 0 ? sv(c) * sv(c) / total : 0.0);
    return r;
}

Ellipse confidence_ellipse(const std::vector<Eigen::Vector2d>& points, double level) {
    if (points.size() < 3) throw ValidationError("an ellipse needs at least 3 points");
    if (!(level > 0.0 && level < 1.0)) throw ValidationError("level must lie in (0, 1)");
    const double n = static_cast<double>(points.size());
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& p : points) mean += p;
    mean /= n;
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& p : points) cov += (p - mean) * (p - mean).transpose();
    cov /= n - 1.0;

    const boost::math::fisher_f f(2.0, n - 1.0);
    const double radius = std::sqrt(2.0 * boost::math::quantile(f, level));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    Eigen::Vector2d ev = es.eigenvalues();  // ascending
    const double scale = std::max(ev(1), 0.0);
    if (ev(0) <= 1e-12 * std::max(scale, 1e-300)) warn("degenerate covariance; ellipse collapses to a segment");
    Ellipse e;
    e.center = mean;
    e.axes = {radius * std::sqrt(std::max(ev(1), 0.0)), radius * std::sqrt(std::max(ev(0), 0.0))};
    const Eigen::Vector2d major = es.eigenvectors().col(1);
    double angle = std::atan2(major.y(), major.x());
    if (angle < 0) angle += std::numbers::pi;
    if (angle >= std::numbers::pi) angle -= std::numbers::pi;
    e.angle = angle;
    return e;
}

std::vector<Eigen::Vector2d> ellipse_outline(const Ellipse& e, int segments) {
    if (segments < 3) throw ValidationError("outline needs at least 3 segments");
    std::vector<Eigen::Vector2d> pts;
    const double c = std::cos(e.angle), s = std::sin(e.angle);
    for (int i = 0; i <= segments; ++i) {
        const double t = 2.0 * std::numbers::pi * i / segments;
        const double x = e.axes(0) * std::cos(t), y = e.axes(1) * std::sin(t);
        pts.push_back(e.center + Eigen::Vector2d(c * x - s * y, s * x + c * y));
    }
    return pts;
}

}  // namespace attachnet
