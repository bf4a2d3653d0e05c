#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "attachnet/dag.hpp"
#include "attachnet/ingest.hpp"
#include "attachnet/score.hpp"

namespace attachnet {

struct SearchConfig {
    int tabu_len = 10;   // recently undone moves that may not be re-applied
    int max_iter = 100;  // consecutive non-improving steps before stopping
    std::optional<int> max_parents;
    int restarts = 0;  // random-perturbation restarts after the first descent
    int perturb = 1;   // random moves applied per restart
    std::uint64_t seed = 1;
    ScoreOptions score;

    void validate() const;  // throws ValidationError
};

enum class MoveKind { add = 0, remove = 1, reverse = 2 };

struct Move {
    int from;
    int to;
    MoveKind kind;

    friend auto operator<=>(const Move&, const Move&) = default;
};

struct SearchResult {
    Dag dag;
    double score;
    int steps = 0;  // moves applied across all descents
};

// Tabu search over add/remove/reverse moves starting from the empty graph (or
// `start`). Always applies the best non-tabu move, even when it lowers the
// score, and returns the best graph seen. Equal-score moves are broken by the
// smallest (from, to, kind).
SearchResult tabu_search(const SufficientStats& stats, const SearchConfig& cfg, const Dag* start = nullptr);

// Bootstrap tallies. Pair counts are symmetric; directed counts split reversible
// (undirected) CPDAG edges half-and-half between both orientations.
class ArcStrengthTable {
public:
    ArcStrengthTable() = default;
    ArcStrengthTable(std::vector<std::string> nodes, int replicates);

    const std::vector<std::string>& nodes() const { return nodes_; }
    int replicates() const { return replicates_; }

    // Fraction of replicates containing the pair in either orientation.
    double strength(int u, int v) const;
    // Fraction of those replicates orienting u -> v (0 when strength is 0).
    double direction(int u, int v) const;

    void tally_directed(int from, int to);
    void tally_undirected(int u, int v);
    void merge(const ArcStrengthTable& other);

    // Builds a table directly from per-ordered-pair (strength, direction)
    // values, e.g. when re-reading an exported CSV.
    static ArcStrengthTable from_values(std::vector<std::string> nodes,
                                        const std::vector<std::vector<double>>& strength,
                                        const std::vector<std::vector<double>>& direction);

    struct Row {
        std::string from;
        std::string to;
        double strength;
        double direction;
    };
    // Every ordered pair with nonzero strength, sorted by (from, to) index.
    std::vector<Row> rows() const;

private:
    std::size_t idx(int u, int v) const { return static_cast<std::size_t>(u) * nodes_.size() + static_cast<std::size_t>(v); }

    std::vector<std::string> nodes_;
    int replicates_ = 0;
    std::vector<double> pair_count_;  // symmetric
    std::vector<double> dir_count_;
};

struct BootstrapOptions {
    int replicates = 100;
    std::size_t sample_size = 1000;
    // Tally each replicate's equivalence class (reversible edges count half in
    // each direction) rather than the arbitrary member the search returned.
    bool cpdag = true;
    unsigned threads = 0;  // 0 = all cores
};

ArcStrengthTable bootstrap_strengths(const ResponseTable& table, const BootstrapOptions& options,
                                     const SearchConfig& cfg);

struct DroppedArc {
    std::string from;
    std::string to;
    double weight;  // strength * direction at the time of the drop
};

struct AveragedNetwork {
    Dag dag;
    std::vector<std::pair<std::string, std::string>> undirected;  // direction exactly 0.5
    std::vector<DroppedArc> dropped;                               // removed to break cycles
};

// Keeps pairs with strength >= threshold, oriented by majority direction.
// Arcs that close cycles are dropped weakest-first (smallest strength *
// direction among arcs lying on a cycle) with a warning for each.
AveragedNetwork average_network(const ArcStrengthTable& strengths, double threshold);

struct StabilityPoint {
    int replicates;
    double directed_mean;
    double directed_sd;
    double undirected_mean;
    double undirected_sd;
};

struct StabilityReport {
    std::vector<StabilityPoint> points;
};

StabilityReport stability_curve(const ResponseTable& table, const std::vector<int>& epochs, int repeats,
                                const BootstrapOptions& options, const SearchConfig& cfg, double threshold = 0.5);

}  // namespace attachnet
