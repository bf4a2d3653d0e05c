#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <unordered_map>

#include "attachnet/error.hpp"
#include "attachnet/random.hpp"
#include "attachnet/structure.hpp"

namespace attachnet {

void SearchConfig::validate() const {
    if (tabu_len < 1) throw ValidationError("tabu length must be >= 1");
    if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
    if (max_parents && *max_parents < 0) throw ValidationError("max_parents must be >= 0");
    if (restarts < 0) throw ValidationError("restarts must be >= 0");
    if (perturb < 1) throw ValidationError("perturb must be >= 1");
}

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<int>& key) const noexcept {
        std::uint64_t h = 0x84222325cbf29ce4ULL;
        for (int x : key) h = mix64(h ^ static_cast<std::uint64_t>(x));
        return static_cast<std::size_t>(h);
    }
};

// Memoized local scores keyed by (node, sorted parents).
class ScoreCache {
public:
    ScoreCache(const SufficientStats& stats, ScoreOptions options) : stats_(stats), options_(options) {}

    double operator()(int node, const std::vector<int>& parents) {
        key_.assign(1, node);
        key_.insert(key_.end(), parents.begin(), parents.end());
        if (auto it = cache_.find(key_); it != cache_.end()) return it->second;
        const double s = local_score(node, parents, stats_, options_);
        cache_.emplace(key_, s);
        return s;
    }

private:
    const SufficientStats& stats_;
    ScoreOptions options_;
    std::vector<int> key_;
    std::unordered_map<std::vector<int>, double, KeyHash> cache_;
};

std::vector<int> with(const std::vector<int>& v, int x) {
    std::vector<int> out;
    out.reserve(v.size() + 1);
    bool placed = false;
    for (int y : v) {
        if (!placed && x < y) {
            out.push_back(x);
            placed = true;
        }
        out.push_back(y);
    }
    if (!placed) out.push_back(x);
    return out;
}

std::vector<int> without(const std::vector<int>& v, int x) {
    std::vector<int> out;
    out.reserve(v.size());
    for (int y : v)
        if (y != x) out.push_back(y);
    return out;
}

Move inverse(const Move& m) {
    switch (m.kind) {
        case MoveKind::add: return {m.from, m.to, MoveKind::remove};
        case MoveKind::remove: return {m.from, m.to, MoveKind::add};
        case MoveKind::reverse: return {m.to, m.from, MoveKind::reverse};
    }
    return m;
}

bool same_score(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

class TabuSearch {
public:
    TabuSearch(const SufficientStats& stats, const SearchConfig& cfg)
        : cfg_(cfg), n_(static_cast<int>(stats.dimension())), cache_(stats, cfg.score) {}

    SearchResult run(Dag start) {
        SearchResult best = descend(std::move(start));
        Rng rng(derive_seed(cfg_.seed, {0x7e57a27ULL}));
        for (int r = 0; r < cfg_.restarts; ++r) {
            Dag perturbed = best.dag;
            for (int p = 0; p < cfg_.perturb; ++p) random_move(perturbed, rng);
            auto candidate = descend(std::move(perturbed));
            const int steps = best.steps + candidate.steps;
            if (candidate.score > best.score && !same_score(candidate.score, best.score)) best = std::move(candidate);
            best.steps = steps;
        }
        return best;
    }

private:
    double node_score(const Dag& g, int v) { return cache_(v, g.parents(v)); }

    double total(const std::vector<double>& node_scores) const {
        double s = 0.0;
        for (double x : node_scores) s += x;
        return s;
    }

    static double gain(double updated, double current) {
        if (updated == -std::numeric_limits<double>::infinity()) return updated;
        if (current == -std::numeric_limits<double>::infinity()) return std::numeric_limits<double>::infinity();
        return updated - current;
    }

    std::vector<std::vector<char>> reachability(const Dag& g) const {
        std::vector<std::vector<char>> reach(static_cast<std::size_t>(n_), std::vector<char>(static_cast<std::size_t>(n_), 0));
        for (int s = 0; s < n_; ++s) {
            auto& row = reach[static_cast<std::size_t>(s)];
            std::vector<int> stack{s};
            row[static_cast<std::size_t>(s)] = 1;
            while (!stack.empty()) {
                const int u = stack.back();
                stack.pop_back();
                for (int v : g.children(u))
                    if (!row[static_cast<std::size_t>(v)]) {
                        row[static_cast<std::size_t>(v)] = 1;
                        stack.push_back(v);
                    }
            }
        }
        return reach;
    }

    bool parent_limit_ok(const Dag& g, int child) const {
        return !cfg_.max_parents || static_cast<int>(g.in_degree(child)) + 1 <= *cfg_.max_parents;
    }

    SearchResult descend(Dag g) {
        std::vector<double> scores(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v) scores[static_cast<std::size_t>(v)] = node_score(g, v);
        double current = total(scores);
        SearchResult best{g, current, 0};
        std::deque<Move> tabu;
        int stale = 0;
        int steps = 0;

        while (stale < cfg_.max_iter) {
            const auto reach = reachability(g);
            std::optional<Move> chosen;
            double chosen_gain = -std::numeric_limits<double>::infinity();
            auto consider = [&](const Move& m, double d) {
                if (std::isnan(d) || d == -std::numeric_limits<double>::infinity()) return;
                for (const auto& t : tabu)
                    if (t == m) return;
                if (!chosen || (d > chosen_gain && !same_score(d, chosen_gain)) ||
                    (same_score(d, chosen_gain) && m < *chosen)) {
                    chosen = m;
                    chosen_gain = d;
                }
            };

            for (int u = 0; u < n_; ++u) {
                for (int v = 0; v < n_; ++v) {
                    if (u == v) continue;
                    const auto su = static_cast<std::size_t>(u), sv = static_cast<std::size_t>(v);
                    if (g.has_arc(u, v)) {
                        const double rm = gain(cache_(v, without(g.parents(v), u)), scores[sv]);
                        consider({u, v, MoveKind::remove}, rm);
                        // Reversal is legal unless another directed path u ~> v exists.
                        bool other_path = false;
                        for (int p : g.parents(v))
                            if (p != u && reach[su][static_cast<std::size_t>(p)]) {
                                other_path = true;
                                break;
                            }
                        if (!other_path && parent_limit_ok(g, u)) {
                            const double add_u = gain(cache_(u, with(g.parents(u), v)), scores[su]);
                            consider({u, v, MoveKind::reverse}, rm + add_u);
                        }
                    } else if (!g.has_arc(v, u) && !reach[sv][su] && parent_limit_ok(g, v)) {
                        consider({u, v, MoveKind::add}, gain(cache_(v, with(g.parents(v), u)), scores[sv]));
                    }
                }
            }
            if (!chosen) break;

            apply(g, *chosen);
            for (int v : {chosen->from, chosen->to}) scores[static_cast<std::size_t>(v)] = node_score(g, v);
            current = total(scores);
            ++steps;
            tabu.push_back(inverse(*chosen));
            while (static_cast<int>(tabu.size()) > cfg_.tabu_len) tabu.pop_front();

            if (current > best.score && !same_score(current, best.score)) {
                best.dag = g;
                best.score = current;
                stale = 0;
            } else {
                ++stale;
            }
        }
        best.steps = steps;
        return best;
    }

    static void apply(Dag& g, const Move& m) {
        switch (m.kind) {
            case MoveKind::add: g.add_arc(m.from, m.to); break;
            case MoveKind::remove: g.remove_arc(m.from, m.to); break;
            case MoveKind::reverse: g.reverse_arc(m.from, m.to); break;
        }
    }

    void random_move(Dag& g, Rng& rng) const {
        // Try a bounded number of random proposals; illegal ones are skipped.
        for (int attempt = 0; attempt < 100; ++attempt) {
            const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_)));
            const int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_)));
            if (u == v) continue;
            if (g.has_arc(u, v)) {
                if (rng.below(2) == 0) {
                    g.remove_arc(u, v);
                    return;
                }
                g.remove_arc(u, v);
                if (!g.reaches(u, v) && parent_limit_ok(g, u)) {
                    g.add_arc(v, u);
                    return;
                }
                g.add_arc(u, v);
            } else if (!g.has_arc(v, u) && !g.reaches(v, u) && parent_limit_ok(g, v)) {
                g.add_arc(u, v);
                return;
            }
        }
    }

    const SearchConfig& cfg_;
    int n_;
    ScoreCache cache_;
};

}  // namespace

SearchResult tabu_search(const SufficientStats& stats, const SearchConfig& cfg, const Dag* start) {
    cfg.validate();
    Dag initial = start ? *start : Dag(stats.names);
    if (initial.size() != stats.dimension()) throw ValidationError("start graph has the wrong node count");
    TabuSearch search(stats, cfg);
    return search.run(std::move(initial));
}

}  // namespace attachnet
