#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "attachnet/analytics.hpp"
#include "attachnet/params.hpp"
#include "attachnet/structure.hpp"

namespace attachnet {

// 64-bit FNV-1a, used for fixture checksums.
std::uint64_t fnv1a64(std::string_view bytes);

// Verifies every file listed in <dir>/MANIFEST ("file rows checksum" lines;
// rows excludes the header) and throws FixtureError on any mismatch.
void verify_fixture_manifest(const std::filesystem::path& dir);

// Model from intercepts.csv (item,intercept,stddev) and coefficients.csv
// (from,to,coefficient) after manifest verification. Node order follows
// intercepts.csv.
Model load_fixture_model(const std::filesystem::path& dir);

Model read_model_csv(std::istream& intercepts, std::istream& coefficients);

std::map<std::string, Polarity> read_polarity_csv(std::istream& in);
std::map<std::string, Polarity> read_polarity_file(const std::filesystem::path& path);

// {"nodes":[{"name","intercept","residual_sd","parents":[{"name","coeff"}]}]}
void write_model_json(std::ostream& out, const Model& model);
Model read_model_json(std::istream& in);
Model read_model_file(const std::filesystem::path& path);
void write_model_file(const std::filesystem::path& path, const Model& model);

// from,to,coefficient sorted by (from, to).
void write_arcs_csv(std::ostream& out, const Model& model);
// item,intercept,stddev in node order.
void write_intercepts_csv(std::ostream& out, const Model& model);

// Graphviz digraph; with a partition, nodes are grouped into labelled
// cluster subgraphs.
void write_dot(std::ostream& out, const Model& model, const Partition* partition = nullptr);

// from,to,strength,direction for every ordered pair with nonzero strength.
void write_strengths_csv(std::ostream& out, const ArcStrengthTable& table);
ArcStrengthTable read_strengths_csv(std::istream& in);

}  // namespace attachnet
