#pragma once

#include <vector>

#include "cyclid/network.hpp"
#include "cyclid/weights.hpp"

namespace cyclid {

// Absolute tolerance under which two tentative path costs count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Elementary arc path from an origin to a destination.
struct Path {
    std::vector<int> arcs;
    std::vector<double> basic_costs_along;  // per-criterion cost of the path
    double combined_cost = 0.0;
};

/// One-to-all shortest-path tree. dist/pred entries are indexed by node;
/// pred_node/pred_arc are -1 at the origin and at unreached nodes.
struct ShortestPathTree {
    int origin = -1;
    std::vector<double> dist;
    std::vector<int> pred_node;
    std::vector<int> pred_arc;
};

/// Dijkstra with a binary heap over the given non-negative arc costs.
///
/// Deterministic tie policy: equal-cost heap entries pop in node-index order,
/// and a label within kTieTolerance of the incumbent replaces it only if its
/// (predecessor node, arc) pair is lexicographically smaller. The final
/// distance of a node always equals the accumulated cost along its
/// predecessor chain.
ShortestPathTree dijkstra(const MultiCostNetwork& network,
                          const std::vector<double>& arc_costs, int origin);

/// Walks the predecessor chain back from `destination` and fills in the
/// per-criterion path costs. Throws if the destination was not reached.
Path extract_path(const MultiCostNetwork& network, const ShortestPathTree& tree,
                  int destination);

Path shortest_path(const MultiCostNetwork& network, const WeightVector& p, int origin,
                   int destination);

/// One path per (O-D pair, weight): result[w][l]. Dijkstra trees are shared
/// across pairs with the same origin and weight; the output is identical to
/// per-pair shortest_path calls.
std::vector<std::vector<Path>> batch_shortest_paths(const MultiCostNetwork& network,
                                                    const WeightSet& weights,
                                                    const std::vector<ODPair>& od_pairs);

}  // namespace cyclid
