#include "attachnet/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "attachnet/csv.hpp"
#include "attachnet/error.hpp"

namespace attachnet {

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double number_cell(const csv::Table& t, std::size_t row, std::size_t col) {
    const auto v = csv::parse_double(csv::trim(t.rows[row][col]));
    if (!v || !std::isfinite(*v))
        throw ParseError("expected a number in column " + t.header[col], t.line_numbers[row]);
    return *v;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void verify_fixture_manifest(const std::filesystem::path& dir) {
    const auto manifest = dir / "MANIFEST";
    std::ifstream in(manifest);
    if (!in) throw FixtureError("missing fixture manifest " + manifest.string());
    std::string line;
    int entries = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string file, checksum;
        std::size_t rows = 0;
        if (!(ls >> file >> rows >> checksum)) throw FixtureError("malformed manifest line: " + line);
        std::string content;
        try {
            content = slurp(dir / file);
        } catch (const IoError& e) {
            throw FixtureError(e.what());
        }
        std::ostringstream hex;
        hex << std::hex;
        hex.width(16);
        hex.fill('0');
        hex << fnv1a64(content);
        if (hex.str() != checksum) throw FixtureError("checksum mismatch for " + file);
        std::istringstream cs(content);
        const auto table = csv::read(cs);
        if (table.rows.size() != rows)
            throw FixtureError(file + ": expected " + std::to_string(rows) + " rows, found " +
                               std::to_string(table.rows.size()));
        ++entries;
    }
    if (entries == 0) throw FixtureError("fixture manifest lists no files");
}

Model read_model_csv(std::istream& intercepts, std::istream& coefficients) {
    const auto it = csv::read(intercepts);
    const auto ic = it.column("item"), bc = it.column("intercept"), sc = it.column("stddev");
    std::vector<std::string> names;
    for (const auto& row : it.rows) names.emplace_back(csv::trim(row[ic]));
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != names.size()) throw ValidationError("intercept table lists an item twice");

    const auto ct = csv::read(coefficients);
    const auto fc = ct.column("from"), tc = ct.column("to"), cc = ct.column("coefficient");
    Dag dag(names);
    std::vector<std::tuple<int, int, double>> arcs;
    for (std::size_t r = 0; r < ct.rows.size(); ++r) {
        const auto from = dag.find(csv::trim(ct.rows[r][fc]));
        const auto to = dag.find(csv::trim(ct.rows[r][tc]));
        if (!from || !to) throw ParseError("arc endpoint not among the intercept items", ct.line_numbers[r]);
        try {
            dag.add_arc(*from, *to);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), ct.line_numbers[r]);
        }
        arcs.emplace_back(*from, *to, number_cell(ct, r, cc));
    }
    Model m{dag, GaussianBnParams(dag)};
    for (std::size_t r = 0; r < it.rows.size(); ++r) {
        auto& node = m.params.node(static_cast<int>(r));
        node.intercept = number_cell(it, r, bc);
        node.residual_sd = number_cell(it, r, sc);
        if (node.residual_sd < 0.0) throw ParseError("negative standard deviation", it.line_numbers[r]);
    }
    for (auto [from, to, c] : arcs) m.params.set_coefficient(from, to, c);
    return m;
}

Model load_fixture_model(const std::filesystem::path& dir) {
    verify_fixture_manifest(dir);
    std::ifstream intercepts(dir / "intercepts.csv"), coefficients(dir / "coefficients.csv");
    if (!intercepts || !coefficients) throw FixtureError("fixture model files missing in " + dir.string());
    return read_model_csv(intercepts, coefficients);
}

std::map<std::string, Polarity> read_polarity_csv(std::istream& in) {
    const auto t = csv::read(in);
    const auto ic = t.column("item"), pc = t.column("polarity");
    std::map<std::string, Polarity> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto v = csv::trim(t.rows[r][pc]);
        Polarity p;
        if (v == "positive") p = Polarity::positive;
        else if (v == "negative") p = Polarity::negative;
        else throw ParseError("polarity must be positive or negative", t.line_numbers[r]);
        if (!out.emplace(std::string(csv::trim(t.rows[r][ic])), p).second)
            throw ParseError("duplicate item", t.line_numbers[r]);
    }
    return out;
}

std::map<std::string, Polarity> read_polarity_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_polarity_csv(in);
}

void write_model_json(std::ostream& out, const Model& model) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (int v = 0; v < static_cast<int>(model.dag.size()); ++v) {
        const auto& p = model.params.node(v);
        nlohmann::ordered_json parents = nlohmann::ordered_json::array();
        for (std::size_t j = 0; j < p.parents.size(); ++j)
            parents.push_back({{"name", model.dag.name(p.parents[j])}, {"coeff", p.coefficients[j]}});
        nodes.push_back({{"name", model.dag.name(v)},
                         {"intercept", p.intercept},
                         {"residual_sd", p.residual_sd},
                         {"parents", std::move(parents)}});
    }
    nlohmann::ordered_json doc;
    doc["nodes"] = std::move(nodes);
    out << doc.dump(2) << '\n';
}

Model read_model_json(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid model JSON: ") + e.what());
    }
    try {
        const auto& nodes = doc.at("nodes");
        if (!nodes.is_array() || nodes.empty()) throw ValidationError("model has no nodes");
        std::vector<std::string> names;
        for (const auto& n : nodes) names.push_back(n.at("name").get<std::string>());
        Dag dag(names);
        std::vector<std::tuple<int, int, double>> arcs;
        for (std::size_t v = 0; v < nodes.size(); ++v)
            for (const auto& p : nodes[v].at("parents")) {
                const int from = dag.index_of(p.at("name").get<std::string>());
                dag.add_arc(from, static_cast<int>(v));
                arcs.emplace_back(from, static_cast<int>(v), p.at("coeff").get<double>());
            }
        Model m{dag, GaussianBnParams(dag)};
        for (std::size_t v = 0; v < nodes.size(); ++v) {
            auto& node = m.params.node(static_cast<int>(v));
            node.intercept = nodes[v].at("intercept").get<double>();
            node.residual_sd = nodes[v].at("residual_sd").get<double>();
        }
        for (auto [from, to, c] : arcs) m.params.set_coefficient(from, to, c);
        m.params.check_consistent(m.dag);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed model JSON: ") + e.what());
    }
}

Model read_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_model_json(in);
}

void write_model_file(const std::filesystem::path& path, const Model& model) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_model_json(out, model);
    if (!out) throw IoError("write failed for " + path.string());
}

void write_arcs_csv(std::ostream& out, const Model& model) {
    out << "from,to,coefficient\n";
    for (const auto& e : model.params.entries())
        out << model.dag.name(e.from) << ',' << model.dag.name(e.to) << ',' << csv::format_double(e.coefficient) << '\n';
}

void write_intercepts_csv(std::ostream& out, const Model& model) {
    out << "item,intercept,stddev\n";
    for (int v = 0; v < static_cast<int>(model.dag.size()); ++v) {
        const auto& p = model.params.node(v);
        out << model.dag.name(v) << ',' << csv::format_double(p.intercept) << ',' << csv::format_double(p.residual_sd)
            << '\n';
    }
}

void write_dot(std::ostream& out, const Model& model, const Partition* partition) {
    out << "digraph network {\n";
    if (partition) {
        for (int c = 0; c < partition->cluster_count(); ++c) {
            out << "  subgraph cluster_" << c + 1 << " {\n";
            out << "    label=\"" << partition->labels[static_cast<std::size_t>(c)] << "\";\n";
            for (const auto& m : partition->members(c)) out << "    \"" << m << "\";\n";
            out << "  }\n";
        }
    } else {
        for (const auto& n : model.dag.names()) out << "  \"" << n << "\";\n";
    }
    for (const auto& e : model.params.entries())
        out << "  \"" << model.dag.name(e.from) << "\" -> \"" << model.dag.name(e.to) << "\" [label=\""
            << csv::format_fixed(e.coefficient, 5) << "\"];\n";
    out << "}\n";
}

void write_strengths_csv(std::ostream& out, const ArcStrengthTable& table) {
    out << "from,to,strength,direction\n";
    for (const auto& r : table.rows())
        out << r.from << ',' << r.to << ',' << csv::format_double(r.strength) << ',' << csv::format_double(r.direction)
            << '\n';
}

ArcStrengthTable read_strengths_csv(std::istream& in) {
    const auto t = csv::read(in);
    const auto fc = t.column("from"), tc = t.column("to"), sc = t.column("strength"), dc = t.column("direction");
    std::vector<std::string> nodes;
    auto index = [&](std::string_view name) {
        auto it = std::find(nodes.begin(), nodes.end(), name);
        if (it != nodes.end()) return static_cast<std::size_t>(it - nodes.begin());
        nodes.emplace_back(name);
        return nodes.size() - 1;
    };
    struct Cell {
        std::size_t u, v;
        double s, d;
    };
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto u = index(csv::trim(t.rows[r][fc]));
        const auto v = index(csv::trim(t.rows[r][tc]));
        cells.push_back({u, v, number_cell(t, r, sc), number_cell(t, r, dc)});
    }
    std::vector<std::size_t> order(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
    std::vector<std::size_t> rank(nodes.size());
    std::vector<std::string> sorted;
    for (std::size_t i = 0; i < order.size(); ++i) {
        rank[order[i]] = i;
        sorted.push_back(nodes[order[i]]);
    }
    const std::size_t n = nodes.size();
    std::vector<std::vector<double>> s(n, std::vector<double>(n, 0.0)), d(n, std::vector<double>(n, 0.0));
    for (const auto& c : cells) {
        s[rank[c.u]][rank[c.v]] = c.s;
        d[rank[c.u]][rank[c.v]] = c.d;
    }
    return ArcStrengthTable::from_values(std::move(sorted), s, d);
}

}  // namespace attachnet
