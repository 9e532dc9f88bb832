#pragma once

#include <utility>
#include <vector>

#include "cyclid/network.hpp"
#include "cyclid/shortest_path.hpp"
#include "cyclid/weights.hpp"

namespace cyclid {

/// Dense |A| x q matrix whose column l holds the total arc flows obtained
/// when every user adopts weight l. Rows follow the network's arc order,
/// columns the weight set's insertion order. Entries are integer-valued
/// (sums of integer demands) stored as doubles.
class FlowMatrix {
public:
    FlowMatrix(int arc_count, WeightSet weights);

    int arc_count() const { return arc_count_; }
    int weight_count() const { return weights_.size(); }

    double at(int arc, int col) const { return values_[std::size_t(arc) * weights_.size() + col]; }
    double& at(int arc, int col) { return values_[std::size_t(arc) * weights_.size() + col]; }

    const std::vector<double>& values() const { return values_; }
    const WeightSet& weight_set() const { return weights_; }

    std::vector<double> column(int col) const;

private:
    int arc_count_;
    WeightSet weights_;
    std::vector<double> values_;  // row-major
};

/// Flow of a single O-D pair routed along `path`: demand on the path's arcs,
/// zero elsewhere. Returned sparse as (arc index, flow) in path order.
std::vector<std::pair<int, double>> assignment_flows(const Path& path, int demand);

/// Total arc flows if every O-D pair routed via the shortest path under `p`.
/// Accumulation runs in O-D order, so repeated calls are bit-identical.
std::vector<double> compute_flow_column(const MultiCostNetwork& network,
                                        const WeightVector& p,
                                        const std::vector<ODPair>& od_pairs);

FlowMatrix build_flow_matrix(const MultiCostNetwork& network, const WeightSet& weights,
                             const std::vector<ODPair>& od_pairs);

/// x = M alpha.
std::vector<double> aggregate_flows(const FlowMatrix& matrix,
                                    const std::vector<double>& alpha);

struct ConservationReport {
    std::vector<int> violating_nodes;
    bool ok() const { return violating_nodes.empty(); }
};

/// Checks node balance of an arc-flow vector against the scaled demands:
/// at every node, outflow minus inflow must equal alpha_weight times the
/// node's net demand over `od_pairs`, within 1e-9.
ConservationReport conservation_check(const MultiCostNetwork& network,
                                      const std::vector<double>& arc_flows,
                                      double alpha_weight,
                                      const std::vector<ODPair>& od_pairs);

}  // namespace cyclid
