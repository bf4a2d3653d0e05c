#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "attachnet/analytics.hpp"
#include "attachnet/compare.hpp"
#include "attachnet/csv.hpp"
#include "attachnet/diagnostics.hpp"
#include "attachnet/error.hpp"
#include "attachnet/influence.hpp"
#include "attachnet/ingest.hpp"
#include "attachnet/model_io.hpp"
#include "attachnet/params.hpp"
#include "attachnet/structure.hpp"

namespace attachnet {

namespace {

namespace fs = std::filesystem;

// Runs `write` against the named file, or against `out` when the path is empty or "-".
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
    if (path.empty() || path == "-") {
        write(out);
        return;
    }
    std::ofstream file(path);
    if (!file) throw IoError("cannot write " + path);
    write(file);
    if (!file) throw IoError("write failed for " + path);
}

// A model argument is either a model JSON file or a fixture directory.
Model load_model(const std::string& path) {
    if (fs::is_directory(path)) return load_fixture_model(path);
    return read_model_file(path);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("ATTACHNET_SEED")) {
        const auto v = csv::parse_int(env);
        if (!v || *v < 0) throw ValidationError("ATTACHNET_SEED must be a non-negative integer");
        return static_cast<std::uint64_t>(*v);
    }
    return 1;
}

AgeRange parse_age_range(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ValidationError("age range must look like LO:HI, got " + s);
    const auto lo = csv::parse_int(s.substr(0, colon)), hi = csv::parse_int(s.substr(colon + 1));
    if (!lo || !hi) throw ValidationError("age range must look like LO:HI, got " + s);
    return {static_cast<int>(*lo), static_cast<int>(*hi)};
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    for (const auto& part : csv::split(s, ','))
        if (auto t = csv::trim(part); !t.empty()) out.emplace_back(t);
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const auto& part : split_list(s)) {
        const auto v = csv::parse_int(part);
        if (!v) throw ValidationError("expected a comma-separated integer list, got " + s);
        out.push_back(static_cast<int>(*v));
    }
    return out;
}

int node_of(const Dag& dag, const std::string& name) {
    if (auto v = dag.find(name)) return *v;
    throw ValidationError("unknown node " + name);
}

std::string join(const std::vector<std::string>& xs, const char* sep = ",") {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
    return s;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
    std::string input, output, codebook, report;
    bool standard = false;
    std::string age, genders, regions;
    bool complete = false;
};

void cmd_ingest(const IngestArgs& a, std::ostream& out, std::ostream& err) {
    ParseSchema schema;
    if (!a.codebook.empty()) schema.codebook = Codebook::load(a.codebook);
    auto parsed = parse_responses_file(a.input, schema);
    for (const auto& issue : parsed.dropped_rows) err << "dropped line " << issue.line << ": " << issue.message << '\n';

    CohortFilter filter = a.standard ? CohortFilter::standard() : CohortFilter{};
    if (!a.age.empty()) filter.age_range = parse_age_range(a.age);
    if (!a.genders.empty()) {
        std::set<Gender> gs;
        for (const auto& g : split_list(a.genders)) {
            auto parsed_g = parse_gender_name(g);
            if (!parsed_g) throw ValidationError("unknown gender " + g);
            gs.insert(*parsed_g);
        }
        filter.genders = gs;
    }
    if (!a.regions.empty()) {
        std::set<Region> rs;
        for (const auto& r : split_list(a.regions)) {
            auto parsed_r = parse_region_name(r);
            if (!parsed_r) throw ValidationError("unknown region " + r);
            rs.insert(*parsed_r);
        }
        filter.regions = rs;
    }
    if (a.complete) filter.require_complete = true;

    const bool filtering = a.standard || !a.age.empty() || !a.genders.empty() || !a.regions.empty() || a.complete;
    const ResponseTable table = filtering ? filter_cohort(parsed.table, filter) : parsed.table;
    if (!a.output.empty()) emit(a.output, out, [&](std::ostream& o) { write_responses(o, table); });
    const auto summary = demographic_summary(table);
    emit(a.report, out, [&](std::ostream& o) { print_demographics(o, summary); });
}

// ---------------------------------------------------------------------------

struct LearnArgs {
    std::string input, output, strengths, stability_out;
    int replicates = 100;
    std::size_t sample_size = 1000;
    std::optional<std::uint64_t> seed;
    double threshold = 0.5;
    int tabu = 10;
    int max_iter = 100;
    std::optional<int> max_parents;
    int restarts = 0;
    bool no_cpdag = false;
    unsigned threads = 0;
    std::string stability;
    int repeats = 5;
    bool full_repro = false;
};

void cmd_learn(LearnArgs a, std::ostream& out, std::ostream& err) {
    if (a.full_repro) {
        a.replicates = 3000;
        a.sample_size = 1000;
        if (a.stability.empty()) a.stability = "50,100,200,500,1000,1500,3000,5000";
        err << "full reproduction run: this takes hours on the complete corpus\n";
    }
    if (a.replicates < 1) throw ValidationError("-R must be >= 1");
    if (!(a.threshold > 0.0 && a.threshold <= 1.0)) throw ValidationError("--threshold must lie in (0, 1]");

    const auto parsed = parse_responses_file(a.input);
    for (const auto& issue : parsed.dropped_rows) err << "dropped line " << issue.line << ": " << issue.message << '\n';
    const auto& table = parsed.table;
    if (!table.complete()) throw ValidationError("learn needs a complete cohort; run ingest with --filter-standard");

    SearchConfig cfg;
    cfg.tabu_len = a.tabu;
    cfg.max_iter = a.max_iter;
    cfg.max_parents = a.max_parents;
    cfg.restarts = a.restarts;
    cfg.seed = resolve_seed(a.seed);
    cfg.validate();
    BootstrapOptions opts;
    opts.replicates = a.replicates;
    opts.sample_size = a.sample_size;
    opts.cpdag = !a.no_cpdag;
    opts.threads = a.threads;

    if (!a.stability.empty()) {
        const auto report = stability_curve(table, parse_int_list(a.stability), a.repeats, opts, cfg, a.threshold);
        emit(a.stability_out, out, [&](std::ostream& o) {
            o << "replicates,directed_mean,directed_sd,undirected_mean,undirected_sd\n";
            for (const auto& p : report.points)
                o << p.replicates << ',' << csv::format_double(p.directed_mean) << ','
                  << csv::format_double(p.directed_sd) << ',' << csv::format_double(p.undirected_mean) << ','
                  << csv::format_double(p.undirected_sd) << '\n';
        });
        if (!a.full_repro) return;
    }

    const auto strengths = bootstrap_strengths(table, opts, cfg);
    if (!a.strengths.empty()) emit(a.strengths, out, [&](std::ostream& o) { write_strengths_csv(o, strengths); });
    const auto averaged = average_network(strengths, a.threshold);
    for (const auto& [u, v] : averaged.undirected) err << "undirected pair left out of the model: " << u << " - " << v << '\n';
    FitOptions fit;
    fit.threads = a.threads;
    Model model{averaged.dag, fit_mle(averaged.dag, table, fit)};
    emit(a.output, out, [&](std::ostream& o) { write_model_json(o, model); });
    err << "averaged network: " << averaged.dag.arc_count() << " arcs, " << averaged.undirected.size()
        << " undirected pairs, " << averaged.dropped.size() << " arcs dropped to break cycles\n";
}

// ---------------------------------------------------------------------------

struct FitArgs {
    std::string model, data, output, sd = "ml";
    unsigned threads = 0;
};

void cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
    const Model structure = load_model(a.model);
    const auto parsed = parse_responses_file(a.data);
    for (const auto& issue : parsed.dropped_rows) err << "dropped line " << issue.line << ": " << issue.message << '\n';
    FitOptions fit;
    fit.threads = a.threads;
    if (a.sd == "ml") fit.sd = SdDenominator::ml;
    else if (a.sd == "unbiased") fit.sd = SdDenominator::unbiased;
    else throw ValidationError("--sd must be ml or unbiased");
    Model model{structure.dag, fit_mle(structure.dag, parsed.table, fit)};
    emit(a.output, out, [&](std::ostream& o) { write_model_json(o, model); });
    double mean_sd = 0.0;
    for (int v = 0; v < static_cast<int>(model.dag.size()); ++v) mean_sd += model.params.node(v).residual_sd;
    err << "mean residual sd: " << csv::format_fixed(mean_sd / static_cast<double>(model.dag.size()), 5) << '\n';
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string model, dot, reference, out_dir;
    int steps = 4;
    double damping = 0.85;
    int top = 5;
};

void cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
    const Model m = load_model(a.model);
    if (m.dag.arc_count() == 0) throw ValidationError("model has no arcs to analyze");
    const auto& dag = m.dag;

    const auto rt = roots_and_terminals(dag);
    out << "nodes: " << dag.size() << "\narcs: " << dag.arc_count() << '\n';
    out << "roots: " << join(rt.roots) << "\nterminals: " << join(rt.terminals) << '\n';
    out << "median |coefficient|: " << csv::format_fixed(median_abs_coefficient(m.params), 5) << '\n';

    const auto deg = degree_centrality(dag);
    const auto btw = betweenness(dag, m.params);
    const auto pr = pagerank(dag, m.params, a.damping);
    for (const auto* c : {&deg.out, &deg.in, &btw, &pr}) {
        out << to_string(c->kind) << ':';
        const auto rank = c->ranking();
        for (int i = 0; i < std::min<int>(a.top, static_cast<int>(rank.size())); ++i) {
            const auto v = static_cast<std::size_t>(rank[static_cast<std::size_t>(i)]);
            out << ' ' << c->nodes[v] << '=' << csv::format_fixed(c->values[v], c->kind == CentralityKind::pagerank ? 5 : 2);
        }
        out << '\n';
    }

    auto wt = walktrap(dag, m.params, a.steps);
    Partition part = wt.partition;
    if (!a.reference.empty()) {
        const auto ref = read_partition_file(a.reference);
        part = relabel_like(part, ref);
        out << "matches reference clusters: " << (part.same_grouping(ref) ? "yes" : "no") << '\n';
    }
    out << "walktrap modularity: " << csv::format_fixed(wt.modularity, 4) << '\n';
    for (int c = 0; c < part.cluster_count(); ++c)
        out << part.labels[static_cast<std::size_t>(c)] << ": " << join(part.members(c)) << '\n';

    const auto coupling = cluster_coupling(dag, m.params, part);
    out << "cluster coupling (sum |c|):\n";
    for (const auto& [k, v] : coupling) out << "  " << k.first << " -> " << k.second << ": " << csv::format_fixed(v, 5) << '\n';

    if (!a.dot.empty()) emit(a.dot, out, [&](std::ostream& o) { write_dot(o, m, &part); });
    if (!a.out_dir.empty()) {
        fs::create_directories(a.out_dir);
        const fs::path dir(a.out_dir);
        for (const auto* c : {&deg.in, &deg.out, &btw, &pr})
            emit((dir / (std::string(to_string(c->kind)) + ".csv")).string(), out,
                 [&](std::ostream& o) { write_centrality_csv(o, *c); });
        emit((dir / "partition.csv").string(), out, [&](std::ostream& o) { write_partition_csv(o, part); });
        emit((dir / "coupling.csv").string(), out, [&](std::ostream& o) {
            o << "from,to,sum_abs\n";
            for (const auto& [k, v] : coupling) o << k.first << ',' << k.second << ',' << csv::format_double(v) << '\n';
        });
        emit((dir / "intercepts.csv").string(), out, [&](std::ostream& o) { write_intercepts_csv(o, m); });
    }
}

// ---------------------------------------------------------------------------

struct InfluenceArgs {
    std::string model, from, to, output;
    std::size_t k = 0;
    std::size_t cap = kDefaultPathCap;
};

void cmd_influence(const InfluenceArgs& a, std::ostream& out) {
    const Model m = load_model(a.model);
    const int from = node_of(m.dag, a.from), to = node_of(m.dag, a.to);
    const double total = total_influence(m.dag, m.params, from, to);
    std::vector<InfluencePath> paths;
    if (a.k > 0 && from != to) paths = top_paths(m.dag, m.params, from, to, a.k, a.cap);
    emit(a.output, out, [&](std::ostream& o) { write_influence_csv(o, m.dag, from, to, total, paths); });
    if (!paths.empty()) {
        double sum = 0.0;
        for (const auto& p : paths) sum += p.product;
        out << "sum of listed paths: " << csv::format_fixed(sum, 4) << '\n';
    }
}

// ---------------------------------------------------------------------------

struct CompareArgs {
    std::string input, second, output, groups, map, mode = "union", fold = "abs", seeds = "1:4000", x = "x", y = "y";
    int k = 2;
    int dims = 2;
    double level = 0.95;
    double r = 0.0;
    int df = 0;
    unsigned threads = 0;
};

void cmd_kmeans(const CompareArgs& a, std::ostream& out) {
    const auto table = read_factor_file(a.input);
    const auto range = parse_age_range(a.seeds);  // same LO:HI syntax
    if (range.lo < 0 || range.lo > range.hi) throw ValidationError("--seeds must be LO:HI with 0 <= LO <= HI");
    const auto r = kmeans_best_seed(table, a.k, static_cast<std::uint64_t>(range.lo),
                                    static_cast<std::uint64_t>(range.hi), a.threads);
    emit(a.output, out, [&](std::ostream& o) {
        o << "item,cluster\n";
        for (std::size_t i = 0; i < table.items.size(); ++i) o << table.items[i] << ",K" << r.assignment[i] + 1 << '\n';
    });
    out << "total within-cluster sum of squares: " << csv::format_fixed(r.total_within_ss, 6) << " (seed " << r.best_seed
        << ")\n";
}

void cmd_pca(const CompareArgs& a, std::ostream& out) {
    const auto table = read_factor_file(a.input);
    const auto r = pca_project(table, a.dims);
    emit(a.output, out, [&](std::ostream& o) { write_factor_csv(o, r.scores, "pc"); });
    for (std::size_t c = 0; c < r.variance_ratio.size(); ++c)
        out << "pc" << c + 1 << " variance explained: " << csv::format_fixed(100.0 * r.variance_ratio[c], 2) << "%\n";
}

void cmd_ellipse(const CompareArgs& a, std::ostream& out) {
    std::ifstream in(a.input);
    if (!in) throw IoError("cannot open " + a.input);
    const auto t = csv::read(in);
    const auto xc = t.column(a.x), yc = t.column(a.y);
    const auto gc = a.groups.empty() ? std::nullopt : std::optional(t.column(a.groups));
    std::map<std::string, std::vector<Eigen::Vector2d>> groups;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto x = csv::parse_double(csv::trim(t.rows[r][xc])), y = csv::parse_double(csv::trim(t.rows[r][yc]));
        if (!x || !y) throw ParseError("non-numeric coordinate", t.line_numbers[r]);
        groups[gc ? std::string(csv::trim(t.rows[r][*gc])) : std::string("all")].push_back({*x, *y});
    }
    std::map<std::string, Ellipse> fitted;
    for (const auto& [g, pts] : groups) fitted[g] = confidence_ellipse(pts, a.level);
    for (const auto& [g, e] : fitted)
        out << g << ": center (" << csv::format_fixed(e.center.x(), 4) << ", " << csv::format_fixed(e.center.y(), 4)
            << ") axes (" << csv::format_fixed(e.axes(0), 4) << ", " << csv::format_fixed(e.axes(1), 4) << ") angle "
            << csv::format_fixed(e.angle, 4) << '\n';
    if (!a.output.empty())
        emit(a.output, out, [&](std::ostream& o) {
            o << "group,x,y\n";
            for (const auto& [g, e] : fitted)
                for (const auto& p : ellipse_outline(e))
                    o << g << ',' << csv::format_double(p.x()) << ',' << csv::format_double(p.y()) << '\n';
        });
}

EdgeWeightSet load_edges(const std::string& path, const std::map<std::string, std::string>& rename, FoldMode fold) {
    if (fs::is_directory(path) || path.ends_with(".json")) return fold_coefficients(load_model(path), fold);
    return read_edge_file(path, rename);
}

void cmd_edges(const CompareArgs& a, std::ostream& out) {
    FoldMode fold;
    if (a.fold == "abs") fold = FoldMode::absolute;
    else if (a.fold == "signed") fold = FoldMode::signed_sum;
    else throw ValidationError("--fold must be abs or signed");
    PairMode mode;
    if (a.mode == "union") mode = PairMode::union_;
    else if (a.mode == "intersection") mode = PairMode::intersection;
    else throw ValidationError("--mode must be union or intersection");

    const auto rename = a.map.empty() ? std::map<std::string, std::string>{} : read_item_map_file(a.map);
    EdgeWeightSet theirs = read_edge_file(a.second, rename);
    EdgeWeightSet ours = load_edges(a.input, {}, fold);
    if (!rename.empty()) {
        std::vector<std::string> items;
        for (const auto& [_, item] : rename) items.push_back(item);
        ours = restrict_to(ours, items);
    }
    const auto r = edge_set_correlation(ours, theirs, mode);
    out << "pairs: " << r.n_pairs << "\nr: " << csv::format_fixed(r.r, 6) << "\nt: " << csv::format_fixed(r.t, 4)
        << "\np: " << std::setprecision(4) << r.p << '\n';
}

void cmd_mwu(const CompareArgs& a, std::ostream& out) {
    std::map<std::string, double> values;
    if (fs::is_directory(a.input) || a.input.ends_with(".json")) {
        const Model m = load_model(a.input);
        for (int v = 0; v < static_cast<int>(m.dag.size()); ++v) values[m.dag.name(v)] = m.params.node(v).intercept;
    } else {
        std::ifstream in(a.input);
        if (!in) throw IoError("cannot open " + a.input);
        const auto t = csv::read(in);
        const auto ic = t.column("item"), vc = t.column("intercept");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto v = csv::parse_double(csv::trim(t.rows[r][vc]));
            if (!v) throw ParseError("non-numeric intercept", t.line_numbers[r]);
            values[std::string(csv::trim(t.rows[r][ic]))] = *v;
        }
    }
    if (a.groups.empty()) throw ValidationError("--groups <polarity.csv> is required");
    const auto polarity = read_polarity_file(a.groups);
    std::vector<double> pos, neg;
    for (const auto& [item, p] : polarity) {
        auto it = values.find(item);
        if (it == values.end()) throw ValidationError("no value for item " + item);
        (p == Polarity::positive ? pos : neg).push_back(it->second);
    }
    if (values.size() != polarity.size()) throw ValidationError("polarity table does not cover every item");
    const auto r = mann_whitney_u(pos, neg);
    out << "positive: " << pos.size() << "\nnegative: " << neg.size() << "\nU: " << csv::format_double(r.statistic)
        << "\np: " << std::setprecision(4) << r.p << '\n';
}

void cmd_pearson(const CompareArgs& a, std::ostream& out) {
    const auto r = pearson_significance(a.r, a.df);
    out << "t: " << csv::format_fixed(r.statistic, 4) << "\np: " << std::setprecision(4) << r.p << '\n';
}

// ---------------------------------------------------------------------------

struct ExportArgs {
    std::string model, format = "json", partition, output;
};

void cmd_export(const ExportArgs& a, std::ostream& out) {
    const Model m = load_model(a.model);
    std::optional<Partition> part;
    if (!a.partition.empty()) part = read_partition_file(a.partition);
    emit(a.output, out, [&](std::ostream& o) {
        if (a.format == "json") write_model_json(o, m);
        else if (a.format == "dot") write_dot(o, m, part ? &*part : nullptr);
        else if (a.format == "arcs") write_arcs_csv(o, m);
        else if (a.format == "intercepts") write_intercepts_csv(o, m);
        else throw ValidationError("--format must be json, dot, arcs or intercepts");
    });
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian Bayesian network analysis of attachment questionnaire responses"};
    app.name("attachnet");
    app.require_subcommand(1);
    app.set_version_flag("--version", "attachnet 1.0.0");

    IngestArgs ingest;
    auto* sub_ingest = app.add_subcommand("ingest", "Parse a raw survey export, filter a cohort, summarize demographics");
    sub_ingest->add_option("input", ingest.input, "Raw CSV/TSV export")->required();
    sub_ingest->add_option("-o,--output", ingest.output, "Canonical cohort CSV");
    sub_ingest->add_option("--codebook", ingest.codebook, "key=value codebook for gender and country codes");
    sub_ingest->add_option("--report", ingest.report, "Write the demographic summary here instead of stdout");
    sub_ingest->add_flag("--filter-standard", ingest.standard, "Ages 18-60, female/male, known region, complete rows");
    sub_ingest->add_option("--age", ingest.age, "Inclusive age range LO:HI");
    sub_ingest->add_option("--gender", ingest.genders, "Comma-separated genders to keep");
    sub_ingest->add_option("--regions", ingest.regions, "Comma-separated regions to keep");
    sub_ingest->add_flag("--require-complete", ingest.complete, "Drop rows with missing responses");

    LearnArgs learn;
    auto* sub_learn = app.add_subcommand("learn", "Bootstrap structure learning and model averaging");
    sub_learn->add_option("input", learn.input, "Canonical cohort CSV")->required();
    sub_learn->add_option("-o,--output", learn.output, "Averaged model JSON");
    sub_learn->add_option("--strengths", learn.strengths, "Arc strength CSV");
    sub_learn->add_option("-R,--replicates", learn.replicates, "Bootstrap replicates");
    sub_learn->add_option("-m,--sample-size", learn.sample_size, "Rows drawn per replicate");
    sub_learn->add_option("--seed", learn.seed, "Random seed (default: $ATTACHNET_SEED or 1)");
    sub_learn->add_option("--threshold", learn.threshold, "Minimum arc strength kept by averaging");
    sub_learn->add_option("--tabu", learn.tabu, "Tabu list length");
    sub_learn->add_option("--max-iter", learn.max_iter, "Non-improving steps before the search stops");
    sub_learn->add_option("--max-parents", learn.max_parents, "Parent set size limit");
    sub_learn->add_option("--restarts", learn.restarts, "Perturbed restarts per search");
    sub_learn->add_flag("--no-cpdag", learn.no_cpdag, "Tally the learned graph instead of its equivalence class");
    sub_learn->add_option("--threads", learn.threads, "Worker threads (0 = all cores)");
    sub_learn->add_option("--stability", learn.stability, "Comma-separated replicate counts for a stability curve");
    sub_learn->add_option("--repeats", learn.repeats, "Repeats per replicate count in the stability curve");
    sub_learn->add_option("--stability-out", learn.stability_out, "Stability curve CSV");
    sub_learn->add_flag("--full-repro", learn.full_repro, "Full-scale run: R=3000, m=1000 and the complete stability curve");

    FitArgs fit;
    auto* sub_fit = app.add_subcommand("fit", "Fit linear-Gaussian parameters on a fixed structure");
    sub_fit->add_option("model", fit.model, "Model JSON or fixture directory providing the structure")->required();
    sub_fit->add_option("data", fit.data, "Canonical cohort CSV")->required();
    sub_fit->add_option("-o,--output", fit.output, "Fitted model JSON");
    sub_fit->add_option("--sd", fit.sd, "Residual sd denominator: ml or unbiased");
    sub_fit->add_option("--threads", fit.threads, "Worker threads (0 = all cores)");

    AnalyzeArgs analyze;
    auto* sub_analyze = app.add_subcommand("analyze", "Centralities, communities and cluster coupling");
    sub_analyze->add_option("model", analyze.model, "Model JSON or fixture directory")->required();
    sub_analyze->add_option("--steps", analyze.steps, "Walktrap random-walk length");
    sub_analyze->add_option("--damping", analyze.damping, "PageRank damping factor");
    sub_analyze->add_option("--top", analyze.top, "Nodes listed per centrality");
    sub_analyze->add_option("--dot", analyze.dot, "Graphviz output with cluster subgraphs");
    sub_analyze->add_option("--reference-clusters", analyze.reference, "node,cluster CSV used to name clusters");
    sub_analyze->add_option("--out-dir", analyze.out_dir, "Directory for plot-ready CSVs");

    InfluenceArgs influence;
    auto* sub_influence = app.add_subcommand("influence", "Total influence and strongest paths between two nodes");
    sub_influence->add_option("model", influence.model, "Model JSON or fixture directory")->required();
    sub_influence->add_option("--from", influence.from, "Source node")->required();
    sub_influence->add_option("--to", influence.to, "Target node")->required();
    sub_influence->add_option("-k", influence.k, "List the k paths with the largest |product|");
    sub_influence->add_option("--cap", influence.cap, "Maximum number of enumerated paths");
    sub_influence->add_option("-o,--output", influence.output, "Influence report CSV");

    CompareArgs cmp;
    auto* sub_compare = app.add_subcommand("compare", "Statistical comparisons");
    sub_compare->require_subcommand(1);
    auto* c_kmeans = sub_compare->add_subcommand("kmeans", "Best-of-seeds k-means over a factor table");
    c_kmeans->add_option("factors", cmp.input, "item,f1,... CSV")->required();
    c_kmeans->add_option("-k", cmp.k, "Cluster count");
    c_kmeans->add_option("--seeds", cmp.seeds, "Inclusive seed range LO:HI");
    c_kmeans->add_option("--threads", cmp.threads, "Worker threads (0 = all cores)");
    c_kmeans->add_option("-o,--output", cmp.output, "item,cluster CSV");
    auto* c_pca = sub_compare->add_subcommand("pca", "Project a factor table onto principal components");
    c_pca->add_option("factors", cmp.input, "item,f1,... CSV")->required();
    c_pca->add_option("--dims", cmp.dims, "Components kept");
    c_pca->add_option("-o,--output", cmp.output, "Projected CSV");
    auto* c_ellipse = sub_compare->add_subcommand("ellipse", "Concentration ellipse per group of 2-D points");
    c_ellipse->add_option("points", cmp.input, "CSV with coordinate columns")->required();
    c_ellipse->add_option("--x", cmp.x, "x column");
    c_ellipse->add_option("--y", cmp.y, "y column");
    c_ellipse->add_option("--group", cmp.groups, "Grouping column");
    c_ellipse->add_option("--level", cmp.level, "Coverage level");
    c_ellipse->add_option("-o,--output", cmp.output, "Outline CSV");
    auto* c_edges = sub_compare->add_subcommand("edges", "Correlate our edge weights with an external network");
    c_edges->add_option("ours", cmp.input, "Model JSON, fixture directory or a,b,weight CSV")->required();
    c_edges->add_option("theirs", cmp.second, "a,b,weight CSV")->required();
    c_edges->add_option("--map", cmp.map, "Two-column CSV mapping their ids to our items");
    c_edges->add_option("--mode", cmp.mode, "union or intersection");
    c_edges->add_option("--fold", cmp.fold, "abs or signed folding of directed coefficients");
    auto* c_mwu = sub_compare->add_subcommand("mwu", "Mann-Whitney U between item groups");
    c_mwu->add_option("values", cmp.input, "item,intercept CSV, model JSON or fixture directory")->required();
    c_mwu->add_option("--groups", cmp.groups, "item,polarity CSV")->required();
    auto* c_pearson = sub_compare->add_subcommand("pearson", "t statistic and p value of a correlation");
    c_pearson->add_option("--r", cmp.r, "Correlation")->required();
    c_pearson->add_option("--df", cmp.df, "Degrees of freedom")->required();

    ExportArgs exp;
    auto* sub_export = app.add_subcommand("export", "Write a model as JSON, DOT or CSV");
    sub_export->add_option("model", exp.model, "Model JSON or fixture directory")->required();
    sub_export->add_option("--format", exp.format, "json, dot, arcs or intercepts");
    sub_export->add_option("--partition", exp.partition, "node,cluster CSV for DOT cluster subgraphs");
    sub_export->add_option("-o,--output", exp.output, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    WarningSink previous = set_warning_sink([&err](std::string_view m) { err << "warning: " << m << '\n'; });
    struct Restore {
        WarningSink& prev;
        ~Restore() { set_warning_sink(prev); }
    } restore{previous};

    try {
        if (*sub_ingest) cmd_ingest(ingest, out, err);
        else if (*sub_learn) cmd_learn(learn, out, err);
        else if (*sub_fit) cmd_fit(fit, out, err);
        else if (*sub_analyze) cmd_analyze(analyze, out);
        else if (*sub_influence) cmd_influence(influence, out);
        else if (*c_kmeans) cmd_kmeans(cmp, out);
        else if (*c_pca) cmd_pca(cmp, out);
        else if (*c_ellipse) cmd_ellipse(cmp, out);
        else if (*c_edges) cmd_edges(cmp, out);
        else if (*c_mwu) cmd_mwu(cmp, out);
        else if (*c_pearson) cmd_pearson(cmp, out);
        else if (*sub_export) cmd_export(exp, out);
        return 0;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace attachnet
