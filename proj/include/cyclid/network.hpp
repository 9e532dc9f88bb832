#pragma once

#include <utility>
#include <vector>

#include "cyclid/weights.hpp"

namespace cyclid {

struct Arc {
    int tail;
    int head;
};

/// Directed road network with r non-negative basic cost vectors on the arcs.
///
/// Arcs are stored in a fixed order (the order they were added); every flow
/// vector and flow matrix in the project indexes arcs by that order.
/// Self-loops are rejected; parallel arcs are allowed and keep distinct
/// indices.
class MultiCostNetwork {
public:
    MultiCostNetwork(int node_count, int criteria_count);

    // Returns the index of the new arc. `costs` must hold one non-negative
    // value per criterion.
    int add_arc(int tail, int head, const std::vector<double>& costs);

    int node_count() const { return node_count_; }
    int criteria_count() const { return criteria_count_; }
    int arc_count() const { return static_cast<int>(arcs_.size()); }

    const Arc& arc(int index) const { return arcs_[index]; }
    const std::vector<Arc>& arcs() const { return arcs_; }

    double cost(int criterion, int arc_index) const {
        return basic_costs_[criterion][arc_index];
    }
    const std::vector<double>& costs_for(int criterion) const {
        return basic_costs_[criterion];
    }

    const std::vector<int>& out_arcs(int node) const { return out_arcs_[node]; }

private:
    friend MultiCostNetwork normalize_costs(const MultiCostNetwork& network);

    int node_count_;
    int criteria_count_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<double>> basic_costs_;  // [criterion][arc]
    std::vector<std::vector<int>> out_arcs_;
};

/// Origin-destination pair with an integer demand (number of users).
struct ODPair {
    int origin;
    int destination;
    int demand;
};

/// Observed flows on the measured arc subset. Arc indices are kept sorted
/// and distinct; `flows` is parallel to `arcs`.
struct MeasuredFlows {
    std::vector<int> arcs;
    std::vector<double> flows;

    static MeasuredFlows from_pairs(std::vector<std::pair<int, double>> entries);

    int size() const { return static_cast<int>(arcs.size()); }

    // Throws if an arc index is out of range, the set is empty, or a flow is
    // negative.
    void check(int arc_count) const;
};

struct ValidationReport {
    bool strongly_connected = false;
    bool costs_strictly_positive = false;
    bool normalized = false;

    bool ok() const { return strongly_connected && costs_strictly_positive && normalized; }
};

/// Rescales every cost vector so all per-criterion sums equal the first
/// criterion's raw sum. Ratios within a criterion are preserved.
/// Throws on an all-zero criterion.
MultiCostNetwork normalize_costs(const MultiCostNetwork& network);

/// Checks strong connectivity (forward and reverse traversal from node 0),
/// strict positivity of all costs, and equality of the per-criterion cost
/// sums (relative tolerance 1e-12).
ValidationReport validate(const MultiCostNetwork& network);

/// Dot product of the arc's basic costs with the weight vector.
double combined_arc_cost(const MultiCostNetwork& network, int arc_index,
                         const WeightVector& p);

/// Combined cost of every arc under p, in arc order. Each entry is computed
/// exactly as combined_arc_cost does.
std::vector<double> combined_costs(const MultiCostNetwork& network, const WeightVector& p);

}  // namespace cyclid
