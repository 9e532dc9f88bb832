#include <doctest.h>

#include <set>
#include <stdexcept>
#include <vector>

#include "cyclid/flow_model.hpp"
#include "cyclid/network.hpp"
#include "cyclid/shortest_path.hpp"
#include "cyclid/synthgen.hpp"
#include "cyclid/weights.hpp"
#include "oracles.hpp"

using namespace cyclid;

namespace {

// 0 -> 1 -> 3 with a detour 0 -> 2 -> 3; arc 2 (1 -> 3) is shared below.
MultiCostNetwork square() {
    MultiCostNetwork net(4, 1);
    net.add_arc(0, 1, {1.0});  // arc 0
    net.add_arc(1, 3, {1.0});  // arc 1
    net.add_arc(0, 2, {5.0});  // arc 2
    net.add_arc(2, 3, {5.0});  // arc 3
    net.add_arc(1, 2, {1.0});  // arc 4
    return net;
}

}  // namespace

TEST_CASE("assignment_flows spreads the demand over the path arcs") {
    const auto net = square();
    const WeightVector p({1.0});
    const Path path = shortest_path(net, p, 0, 3);
    REQUIRE(path.arcs == std::vector<int>{0, 1});

    const auto flows = assignment_flows(path, 10);
    CHECK(flows == std::vector<std::pair<int, double>>{{0, 10.0}, {1, 10.0}});

    CHECK_THROWS_AS(assignment_flows(path, 0), std::invalid_argument);

    // The support is exactly the path's arc set.
    Rng rng(3);
    const auto grid = make_grid_network(4, 2, 5, 20, rng);
    const Path random_path = shortest_path(grid, WeightVector({0.4, 0.6}), 0, 15);
    const auto sparse = assignment_flows(random_path, 7);
    std::set<int> support;
    for (const auto& [arc, value] : sparse) {
        CHECK(value == 7.0);
        support.insert(arc);
    }
    CHECK(support == std::set<int>(random_path.arcs.begin(), random_path.arcs.end()));
}

TEST_CASE("compute_flow_column matches the enumeration oracle") {
    Rng rng(21);
    const auto net = make_grid_network(3, 3, 5, 20, rng);
    const std::vector<ODPair> pairs = {{0, 8, 10}, {2, 6, 10}, {8, 0, 5}};
    for (int k = 0; k < 6; ++k) {
        const WeightVector p(rng.dirichlet_uniform(3));
        const auto column = compute_flow_column(net, p, pairs);
        const auto expected = oracle::brute_force_flow_column(net, p, pairs);
        CHECK(column == expected);
    }
}

TEST_CASE("build_flow_matrix stacks per-weight columns") {
    const auto net = square();
    WeightSet weights;
    weights.insert(WeightVector({1.0}));
    const std::vector<ODPair> pairs = {{0, 3, 10}, {0, 2, 10}};

    const auto matrix = build_flow_matrix(net, weights, pairs);
    CHECK(matrix.arc_count() == net.arc_count());
    CHECK(matrix.weight_count() == 1);
    // Pair one routes 0-1-3, pair two routes 0-1-2 (cost 2 beats the direct
    // arc's 5), so arc 0 carries both demands.
    CHECK(matrix.column(0) == std::vector<double>{20.0, 10.0, 0.0, 0.0, 10.0});

    // A duplicated weight cannot enter a WeightSet, but two distinct weights
    // that induce the same routing give identical columns.
    MultiCostNetwork two(2, 2);
    two.add_arc(0, 1, {2.0, 3.0});
    WeightSet pair_set;
    pair_set.insert(WeightVector({0.3, 0.7}));
    pair_set.insert(WeightVector({0.6, 0.4}));
    const auto m2 = build_flow_matrix(two, pair_set, {{0, 1, 4}});
    CHECK(m2.column(0) == m2.column(1));
}

TEST_CASE("flow matrix entries are integral and column mass tracks path lengths") {
    Rng rng(9);
    const auto net = make_grid_network(4, 3, 5, 20, rng);
    WeightSet weights;
    weights.insert(WeightVector(rng.dirichlet_uniform(3)));
    weights.insert(WeightVector(rng.dirichlet_uniform(3)));
    const std::vector<ODPair> pairs = {{0, 15, 10}, {3, 12, 10}, {5, 9, 10}};

    const auto matrix = build_flow_matrix(net, weights, pairs);
    const auto table = batch_shortest_paths(net, weights, pairs);
    for (int l = 0; l < weights.size(); ++l) {
        double mass = 0.0;
        for (int a = 0; a < matrix.arc_count(); ++a) {
            const double v = matrix.at(a, l);
            CHECK(v >= 0.0);
            CHECK(v == double(long(v)));
            mass += v;
        }
        double expected = 0.0;
        for (std::size_t w = 0; w < pairs.size(); ++w) {
            expected += double(pairs[w].demand) * double(table[w][l].arcs.size());
        }
        CHECK(mass == expected);
    }

    // Bit-identical rebuild.
    const auto again = build_flow_matrix(net, weights, pairs);
    CHECK(matrix.values() == again.values());
}

TEST_CASE("aggregate_flows is Mα with the usual edge cases") {
    const auto net = square();
    WeightSet weights;
    weights.insert(WeightVector({1.0}));
    const auto matrix = build_flow_matrix(net, weights, {{0, 3, 10}});

    CHECK(aggregate_flows(matrix, {1.0}) == matrix.column(0));
    CHECK_THROWS_AS(aggregate_flows(matrix, {0.5, 0.5}), std::invalid_argument);

    // Linearity on a two-column matrix.
    MultiCostNetwork two(2, 2);
    two.add_arc(0, 1, {2.0, 3.0});
    two.add_arc(0, 1, {3.0, 2.0});
    WeightSet ws;
    ws.insert(WeightVector({0.9, 0.1}));  // routes on arc 0
    ws.insert(WeightVector({0.1, 0.9}));  // routes on arc 1
    const auto m2 = build_flow_matrix(two, ws, {{0, 1, 8}});
    const auto xa = aggregate_flows(m2, {1.0, 0.0});
    const auto xb = aggregate_flows(m2, {0.0, 1.0});
    const auto mid = aggregate_flows(m2, {0.5, 0.5});
    for (int a = 0; a < m2.arc_count(); ++a) {
        CHECK(mid[a] == doctest::Approx(0.5 * xa[a] + 0.5 * xb[a]).epsilon(1e-12));
    }
}

TEST_CASE("conservation_check accepts valid flows and localizes a perturbation") {
    Rng rng(17);
    const auto net = make_grid_network(4, 2, 5, 20, rng);
    const std::vector<ODPair> pairs = {{0, 15, 10}, {6, 1, 10}};
    const WeightVector p({0.5, 0.5});
    auto column = compute_flow_column(net, p, pairs);

    CHECK(conservation_check(net, column, 1.0, pairs).ok());

    const std::vector<double> zero(net.arc_count(), 0.0);
    CHECK(conservation_check(net, zero, 0.0, pairs).ok());

    // Scaled flows balance against scaled demands.
    auto scaled = column;
    for (double& v : scaled) v *= 0.25;
    CHECK(conservation_check(net, scaled, 0.25, pairs).ok());
    CHECK_FALSE(conservation_check(net, scaled, 1.0, pairs).ok());

    // Adding one unit on one arc unbalances exactly its two endpoints.
    column[5] += 1.0;
    const auto report = conservation_check(net, column, 1.0, pairs);
    REQUIRE(report.violating_nodes.size() == 2);
    const Arc& arc = net.arc(5);
    CHECK(report.violating_nodes[0] == std::min(arc.tail, arc.head));
    CHECK(report.violating_nodes[1] == std::max(arc.tail, arc.head));

    CHECK_THROWS_AS(conservation_check(net, {1.0, 2.0}, 1.0, pairs),
                    std::invalid_argument);
}
