#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Dense>

#include "attachnet/error.hpp"
#include "attachnet/influence.hpp"
#include "attachnet/model_io.hpp"
#include "helpers.hpp"

using namespace attachnet;

namespace {

// p, q, r, s, t: q and p both feed r, s, t; r -> s, r -> t, s -> t.
Model five_node_example() {
    Dag g({"p", "q", "r", "s", "t"});
    for (auto [a, b] : std::vector<Arc>{{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}) g.add_arc(a, b);
    GaussianBnParams p(g);
    double c = 0.1;
    for (const auto& [a, b] : g.arcs()) {
        p.set_coefficient(a, b, c);
        c += 0.1;
    }
    return {g, p};
}

double path_sum(const Dag& g, const GaussianBnParams& p, int from, int to) {
    double s = 0;
    for (const auto& path : enumerate_paths(g, from, to)) s += path_product(path, p);
    return s;
}

// Solves the structural equations x = B^T x + e for the response to a unit
// shock at `from`, i.e. the column of (I - B^T)^-1.
double propagation(const Dag& g, const GaussianBnParams& p, int from, int to, double h) {
    const int n = static_cast<int>(g.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    for (const auto& e : p.entries()) a(e.to, e.from) -= e.coefficient;
    Eigen::VectorXd base = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd bumped = base;
    bumped(from) = h;
    const auto lu = a.lu();
    return (lu.solve(bumped)(to) - lu.solve(base)(to)) / h;
}

}  // namespace

TEST_CASE("path enumeration on the five-node example") {
    const auto m = five_node_example();
    const auto paths = enumerate_paths(m.dag, 1, 4);
    CHECK(paths.size() == 4);
    CHECK(paths[0] == std::vector<int>{1, 2, 3, 4});
    CHECK(paths[1] == std::vector<int>{1, 2, 4});
    CHECK(paths[2] == std::vector<int>{1, 3, 4});
    CHECK(paths[3] == std::vector<int>{1, 4});
    const auto& p = m.params;
    const double expect = p.coefficient(1, 2) * p.coefficient(2, 4) + p.coefficient(1, 3) * p.coefficient(3, 4) +
                          p.coefficient(1, 2) * p.coefficient(2, 3) * p.coefficient(3, 4) + p.coefficient(1, 4);
    CHECK(total_influence(m.dag, p, 1, 4) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(enumerate_paths(m.dag, 0, 4).size() == 4);
}

TEST_CASE("path enumeration limits") {
    const auto m = five_node_example();
    CHECK(enumerate_paths(m.dag, 4, 1).empty());
    CHECK(enumerate_paths(m.dag, 1, 0).empty());
    CHECK_THROWS_AS(enumerate_paths(m.dag, 0, 4, 3), PathLimitError);
    CHECK(enumerate_paths(m.dag, 0, 4, 4).size() == 4);
}

TEST_CASE("path products") {
    const auto m = five_node_example();
    CHECK(path_product({1, 4}, m.params) == m.params.coefficient(1, 4));
    CHECK(path_product({2}, m.params) == 1.0);
    CHECK_THROWS_AS(path_product({4, 1}, m.params), ValidationError);
}

TEST_CASE("dynamic programme equals the path sum and the propagation oracle") {
    Rng rng(404);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(8));
        const auto g = testing::random_dag(n, 0.45, rng);
        const auto p = testing::random_params(g, rng);
        for (int from = 0; from < n; ++from)
            for (int to = 0; to < n; ++to) {
                if (from == to) continue;
                const double dp = total_influence(g, p, from, to);
                CHECK(std::abs(dp - path_sum(g, p, from, to)) <= 1e-12);
                const double fd = propagation(g, p, from, to, 1e-3);
                CHECK(std::abs(dp - fd) <= 1e-6 * std::max(1.0, std::abs(dp)));
            }
    }
}

TEST_CASE("influence properties") {
    const auto m = five_node_example();
    CHECK(total_influence(m.dag, m.params, 2, 2) == 1.0);
    CHECK(total_influence(m.dag, m.params, 4, 0) == 0.0);

    // Each path is linear in any single coefficient it crosses at most once.
    GaussianBnParams doubled = m.params;
    doubled.set_coefficient(1, 4, 2 * m.params.coefficient(1, 4));
    CHECK(total_influence(m.dag, doubled, 1, 4) - total_influence(m.dag, m.params, 1, 4) ==
          doctest::Approx(m.params.coefficient(1, 4)));

    // Chains of sub-unit coefficients decay with length.
    Dag chain(testing::names(6));
    for (int i = 0; i < 5; ++i) chain.add_arc(i, i + 1);
    GaussianBnParams cp(chain);
    for (int i = 0; i < 5; ++i) cp.set_coefficient(i, i + 1, 0.7);
    for (int k = 2; k < 6; ++k)
        CHECK(std::abs(total_influence(chain, cp, 0, k)) < std::abs(total_influence(chain, cp, 0, k - 1)));
}

TEST_CASE("top paths rank by magnitude") {
    const auto m = five_node_example();
    const auto top = top_paths(m.dag, m.params, 1, 4, 2);
    REQUIRE(top.size() == 2);
    CHECK(std::abs(top[0].product) >= std::abs(top[1].product));
    auto all = top_paths(m.dag, m.params, 1, 4, 10);
    CHECK(all.size() == 4);
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(std::abs(all[i - 1].product) >= std::abs(all[i].product));
}

TEST_CASE("median absolute coefficient") {
    Dag g(testing::names(5));
    g.add_arc(0, 1);
    g.add_arc(1, 2);
    g.add_arc(2, 3);
    g.add_arc(3, 4);
    GaussianBnParams p(g);
    p.set_coefficient(0, 1, 0.1);
    p.set_coefficient(1, 2, -0.4);
    p.set_coefficient(2, 3, 0.3);
    p.set_coefficient(3, 4, 0.2);
    CHECK(median_abs_coefficient(p) == doctest::Approx(0.25));
    Dag one(testing::names(2));
    one.add_arc(0, 1);
    GaussianBnParams q(one);
    q.set_coefficient(0, 1, -0.5);
    CHECK(median_abs_coefficient(q) == 0.5);
    CHECK_THROWS_AS(median_abs_coefficient(GaussianBnParams(Dag(testing::names(3)))), ValidationError);
}

TEST_CASE("fixture influence") {
    const auto m = load_fixture_model(ATTACHNET_FIXTURE_DIR);
    const auto id = [&](const char* s) { return m.dag.index_of(s); };
    CHECK(median_abs_coefficient(m.params) == 0.17217);

    const auto q02 = top_paths(m.dag, m.params, id("Q02"), id("Q03"), 2);
    REQUIRE(q02.size() == 2);
    CHECK(format_path(m.dag, q02[0].nodes) == "Q02>Q22>Q23>Q03");
    CHECK(q02[0].product == doctest::Approx(0.0074).epsilon(0.01));
    CHECK(format_path(m.dag, q02[1].nodes) == "Q02>Q08>Q22>Q23>Q03");

    const std::vector<std::string> listed{"Q05", "Q07", "Q03"};
    std::vector<int> path;
    for (const auto& s : listed) path.push_back(m.dag.index_of(s));
    CHECK(path_product(path, m.params) == doctest::Approx(-0.1394).epsilon(5e-3));

    const auto clusters = read_partition_file(std::string(ATTACHNET_FIXTURE_DIR) + "/clusters.csv");
    const auto coupling = cluster_coupling(m.dag, m.params, clusters);
    CHECK(coupling.at({"C2", "C3"}) == doctest::Approx(1.45430).epsilon(1e-9));
    CHECK(coupling.at({"C4", "C3"}) == doctest::Approx(0.60669).epsilon(1e-9));
    CHECK_FALSE(coupling.contains({"C1", "C1"}));

    std::ostringstream csv;
    write_influence_csv(csv, m.dag, id("Q02"), id("Q03"), total_influence(m.dag, m.params, id("Q02"), id("Q03")), q02);
    const std::string text = csv.str();
    CHECK(text.rfind("source,target,total,path_rank,path,product\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
