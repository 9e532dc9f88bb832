#include "cyclid/shortest_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>

namespace cyclid {

namespace {

struct HeapEntry {
    double dist;
    int node;
    // Min-heap on (dist, node): exact comparison keeps the heap order strict.
    bool operator>(const HeapEntry& o) const {
        if (dist != o.dist) return dist > o.dist;
        return node > o.node;
    }
};

}  // namespace

ShortestPathTree dijkstra(const MultiCostNetwork& network,
                          const std::vector<double>& arc_costs, int origin) {
    const int n = network.node_count();
    if (origin < 0 || origin >= n) throw std::invalid_argument("origin out of range");
    if (static_cast<int>(arc_costs.size()) != network.arc_count()) {
        throw std::invalid_argument("arc cost vector length mismatch");
    }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    ShortestPathTree tree;
    tree.origin = origin;
    tree.dist.assign(n, kInf);
    tree.pred_node.assign(n, -1);
    tree.pred_arc.assign(n, -1);

    std::vector<char> done(n, 0);
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap;
    tree.dist[origin] = 0.0;
    heap.push({0.0, origin});

    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (int arc_index : network.out_arcs(u)) {
            const Arc& arc = network.arc(arc_index);
            const int v = arc.head;
            if (done[v]) continue;
            const double candidate = tree.dist[u] + arc_costs[arc_index];
            const double incumbent = tree.dist[v];
            bool adopt = false;
            if (candidate < incumbent - kTieTolerance) {
                adopt = true;
            } else if (std::abs(candidate - incumbent) <= kTieTolerance) {
                // Tie: prefer the smaller (predecessor node, arc) pair.
                if (u < tree.pred_node[v] ||
                    (u == tree.pred_node[v] && arc_index < tree.pred_arc[v])) {
                    adopt = true;
                }
            }
            if (adopt) {
                tree.dist[v] = candidate;
                tree.pred_node[v] = u;
                tree.pred_arc[v] = arc_index;
                heap.push({candidate, v});
            }
        }
    }
    return tree;
}

Path extract_path(const MultiCostNetwork& network, const ShortestPathTree& tree,
                  int destination) {
    if (destination < 0 || destination >= network.node_count()) {
        throw std::invalid_argument("destination out of range");
    }
    if (destination != tree.origin && tree.pred_arc[destination] < 0) {
        throw std::runtime_error("destination " + std::to_string(destination) +
                                 " unreachable from " + std::to_string(tree.origin));
    }
    Path path;
    for (int v = destination; v != tree.origin; v = tree.pred_node[v]) {
        path.arcs.push_back(tree.pred_arc[v]);
    }
    std::reverse(path.arcs.begin(), path.arcs.end());

    path.basic_costs_along.assign(network.criteria_count(), 0.0);
    for (int arc_index : path.arcs) {
        for (int h = 0; h < network.criteria_count(); ++h) {
            path.basic_costs_along[h] += network.cost(h, arc_index);
        }
    }
    path.combined_cost = tree.dist[destination];
    return path;
}

Path shortest_path(const MultiCostNetwork& network, const WeightVector& p, int origin,
                   int destination) {
    if (origin == destination) throw std::invalid_argument("origin equals destination");
    const auto costs = combined_costs(network, p);
    const auto tree = dijkstra(network, costs, origin);
    return extract_path(network, tree, destination);
}

std::vector<std::vector<Path>> batch_shortest_paths(const MultiCostNetwork& network,
                                                    const WeightSet& weights,
                                                    const std::vector<ODPair>& od_pairs) {
    std::vector<std::vector<Path>> table(od_pairs.size());
    for (auto& row : table) row.resize(weights.size());

    for (int l = 0; l < weights.size(); ++l) {
        const auto costs = combined_costs(network, weights[l]);
        std::map<int, ShortestPathTree> trees;  // origin -> tree, built on demand
        for (std::size_t w = 0; w < od_pairs.size(); ++w) {
            const ODPair& od = od_pairs[w];
            auto it = trees.find(od.origin);
            if (it == trees.end()) {
                it = trees.emplace(od.origin, dijkstra(network, costs, od.origin)).first;
            }
            table[w][l] = extract_path(network, it->second, od.destination);
        }
    }
    return table;
}

}  // namespace cyclid
