#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "attachnet/compare.hpp"
#include "attachnet/csv.hpp"
#include "attachnet/error.hpp"
#include "attachnet/parallel.hpp"
#include "attachnet/random.hpp"

namespace attachnet {

FactorTable read_factor_csv(std::istream& in) {
    const auto t = csv::read(in);
    const auto ic = t.column("item");
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < t.header.size(); ++c)
        if (c != ic) cols.push_back(c);
    if (cols.empty()) throw ValidationError("factor table has no factor columns");
    FactorTable f;
    f.values.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        f.items.emplace_back(csv::trim(t.rows[r][ic]));
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const auto v = csv::parse_double(csv::trim(t.rows[r][cols[j]]));
            if (!v || !std::isfinite(*v)) throw ParseError("non-numeric factor value", t.line_numbers[r]);
            f.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = *v;
        }
    }
    return f;
}

FactorTable read_factor_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_factor_csv(in);
}

void write_factor_csv(std::ostream& out, const FactorTable& t, const std::string& prefix) {
    out << "item";
    for (Eigen::Index j = 0; j < t.values.cols(); ++j) out << ',' << prefix << j + 1;
    out << '\n';
    for (std::size_t i = 0; i < t.items.size(); ++i) {
        out << t.items[i];
        for (Eigen::Index j = 0; j < t.values.cols(); ++j)
            out << ',' << csv::format_double(t.values(static_cast<Eigen::Index>(i), j));
        out << '\n';
    }
}

KMeansResult kmeans_lloyd(const Eigen::MatrixXd& data, int k, std::uint64_t seed, int max_iter) {
    const auto n = data.rows();
    if (k < 1) throw ValidationError("k must be >= 1");
    if (k > n) throw ValidationError("k = " + std::to_string(k) + " exceeds the item count " + std::to_string(n));
    Rng rng(seed);
    const auto init = rng.sample_without_replacement(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
    Eigen::MatrixXd centers(k, data.cols());
    for (int c = 0; c < k; ++c) centers.row(c) = data.row(static_cast<Eigen::Index>(init[static_cast<std::size_t>(c)]));

    std::vector<int> assign(static_cast<std::size_t>(n), -1);
    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = (data.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[static_cast<std::size_t>(i)] != best) {
                assign[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        if (!changed) break;
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, data.cols());
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(assign[static_cast<std::size_t>(i)]) += data.row(i);
            ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
        }
        // An emptied cluster keeps its previous center.
        for (int c = 0; c < k; ++c)
            if (counts[static_cast<std::size_t>(c)] > 0) centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
    }

    KMeansResult r;
    std::map<int, int> dense;
    for (int a : assign) dense.emplace(a, static_cast<int>(dense.size()));
    r.centers.resize(static_cast<Eigen::Index>(dense.size()), data.cols());
    for (auto [old, fresh] : dense) r.centers.row(fresh) = centers.row(old);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = dense[assign[static_cast<std::size_t>(i)]];
        r.assignment.push_back(c);
        r.total_within_ss += (data.row(i) - r.centers.row(c)).squaredNorm();
    }
    r.best_seed = seed;
    return r;
}

KMeansResult kmeans_best_seed(const FactorTable& data, int k, std::uint64_t seed_lo, std::uint64_t seed_hi,
                              unsigned threads) {
    if (seed_hi < seed_lo) throw ValidationError("empty seed range");
    if (data.values.rows() == 0) throw ValidationError("empty factor table");
    const std::size_t count = static_cast<std::size_t>(seed_hi - seed_lo + 1);
    std::vector<KMeansResult> runs(count);
    parallel_for(count, threads, [&](std::size_t i) { runs[i] = kmeans_lloyd(data.values, k, seed_lo + i); });
    std::size_t best = 0;
    for (std::size_t i = 1; i < count; ++i)
        if (runs[i].total_within_ss < runs[best].total_within_ss) best = i;
    return runs[best];
}

}  // namespace attachnet
