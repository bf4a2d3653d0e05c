#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "attachnet/compare.hpp"
#include "attachnet/csv.hpp"
#include "attachnet/error.hpp"

namespace attachnet {

TestResult pearson_significance(double r, int df) {
    if (df < 1) throw ValidationError("df must be >= 1");
    if (!(std::abs(r) <= 1.0)) throw ValidationError("correlation must lie in [-1, 1]");
    if (std::abs(r) == 1.0) return {std::copysign(std::numeric_limits<double>::infinity(), r), 0.0};
    const double t = r * std::sqrt(df / (1.0 - r * r));
    const boost::math::students_t dist(df);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return {t, std::min(1.0, p)};
}

TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw ValidationError("Mann-Whitney needs two nonempty samples");
    const std::size_t na = a.size(), nb = b.size(), n = na + nb;
    std::vector<std::pair<double, int>> pooled;
    for (double x : a) pooled.push_back({x, 0});
    for (double x : b) pooled.push_back({x, 1});
    for (const auto& [x, _] : pooled)
        if (!std::isfinite(x)) throw ValidationError("Mann-Whitney samples must be finite");
    std::sort(pooled.begin(), pooled.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    // Doubled midranks keep every rank an integer.
    std::vector<long> rank2(n);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        const long mid2 = static_cast<long>(i + j + 1);  // 2 * average of 1-based ranks i+1..j
        for (std::size_t k = i; k < j; ++k) rank2[k] = mid2;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    long w2 = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (pooled[i].second == 0) w2 += rank2[i];
    const double u = w2 / 2.0 - static_cast<double>(na * (na + 1)) / 2.0;

    if (na * nb <= 400) {
        // Enumerate the rank-sum distribution of the smaller sample; the
        // two-sided p is the same from either side.
        const long max_sum = std::accumulate(rank2.begin(), rank2.end(), 0L);
        const int side = na <= nb ? 0 : 1;
        const std::size_t m = side == 0 ? na : nb;
        const long w = side == 0 ? w2 : max_sum - w2;
        // ways[j][s]: subsets of size j with doubled rank sum s.
        std::vector<std::vector<double>> ways(m + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
        ways[0][0] = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = static_cast<std::size_t>(rank2[i]);
            for (std::size_t j = std::min(m, i + 1); j >= 1; --j)
                for (std::size_t s = static_cast<std::size_t>(max_sum); s >= r; --s) ways[j][s] += ways[j - 1][s - r];
        }
        double lower = 0.0, upper = 0.0, total = 0.0;
        for (std::size_t s = 0; s <= static_cast<std::size_t>(max_sum); ++s) {
            const double c = ways[m][s];
            total += c;
            if (static_cast<long>(s) <= w) lower += c;
            if (static_cast<long>(s) >= w) upper += c;
        }
        return {u, std::min(1.0, 2.0 * std::min(lower, upper) / total)};
    }

    const double dn = static_cast<double>(n);
    const double mu = static_cast<double>(na * nb) / 2.0;
    const double var = static_cast<double>(na * nb) / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    if (var <= 0.0) return {u, 1.0};
    const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
    const boost::math::normal norm;
    return {u, std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(norm, z)))};
}

ItemPair make_pair_key(std::string a, std::string b) {
    if (a == b) throw ValidationError("pair endpoints must differ: " + a);
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

EdgeWeightSet fold_coefficients(const Model& model, FoldMode mode) {
    EdgeWeightSet out;
    for (const auto& e : model.params.entries())
        out[make_pair_key(model.dag.name(e.from), model.dag.name(e.to))] += e.coefficient;
    if (mode == FoldMode::absolute)
        for (auto& [_, w] : out) w = std::abs(w);
    return out;
}

EdgeWeightSet restrict_to(const EdgeWeightSet& set, const std::vector<std::string>& items) {
    const std::set<std::string> keep(items.begin(), items.end());
    EdgeWeightSet out;
    for (const auto& [k, w] : set)
        if (keep.count(k.first) && keep.count(k.second)) out.emplace(k, w);
    return out;
}

EdgeWeightSet read_edge_csv(std::istream& in, const std::map<std::string, std::string>& rename) {
    const auto t = csv::read(in);
    const auto ac = t.column("a"), bc = t.column("b"), wc = t.column("weight");
    EdgeWeightSet out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        std::string a(csv::trim(t.rows[r][ac])), b(csv::trim(t.rows[r][bc]));
        if (!rename.empty()) {
            auto ia = rename.find(a), ib = rename.find(b);
            if (ia == rename.end() || ib == rename.end()) continue;
            a = ia->second;
            b = ib->second;
        }
        const auto w = csv::parse_double(csv::trim(t.rows[r][wc]));
        if (!w || !std::isfinite(*w)) throw ParseError("non-numeric weight", t.line_numbers[r]);
        if (!out.emplace(make_pair_key(a, b), *w).second) throw ParseError("duplicate pair " + a + "/" + b, t.line_numbers[r]);
    }
    return out;
}

EdgeWeightSet read_edge_file(const std::filesystem::path& path, const std::map<std::string, std::string>& rename) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_edge_csv(in, rename);
}

std::map<std::string, std::string> read_item_map_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    const auto t = csv::read(in);
    if (t.header.size() != 2) throw ValidationError("item map must have exactly two columns");
    std::map<std::string, std::string> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        if (!out.emplace(std::string(csv::trim(t.rows[r][0])), std::string(csv::trim(t.rows[r][1]))).second)
            throw ParseError("duplicate key in item map", t.line_numbers[r]);
    return out;
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("pearson_r needs two equal-length samples of size >= 2");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw NumericError("correlation undefined for a constant sample");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

EdgeCorrelation edge_set_correlation(const EdgeWeightSet& ours, const EdgeWeightSet& theirs, PairMode mode) {
    std::set<ItemPair> keys;
    auto present = [](const EdgeWeightSet& s, const ItemPair& k) {
        auto it = s.find(k);
        return it != s.end() && it->second != 0.0;
    };
    for (const auto* s : {&ours, &theirs})
        for (const auto& [k, w] : *s)
            if (w != 0.0) keys.insert(k);
    std::vector<double> x, y;
    for (const auto& k : keys) {
        const bool a = present(ours, k), b = present(theirs, k);
        if (mode == PairMode::intersection && !(a && b)) continue;
        x.push_back(a ? ours.at(k) : 0.0);
        y.push_back(b ? theirs.at(k) : 0.0);
    }
    if (x.size() < 3) throw ValidationError("edge correlation needs at least 3 pairs, got " + std::to_string(x.size()));
    EdgeCorrelation out;
    out.n_pairs = x.size();
    out.r = pearson_r(x, y);
    const auto sig = pearson_significance(out.r, static_cast<int>(x.size()) - 2);
    out.t = sig.statistic;
    out.p = sig.p;
    return out;
}

}  // namespace attachnet
