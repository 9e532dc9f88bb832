#include "cyclid/flow_model.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace cyclid {

FlowMatrix::FlowMatrix(int arc_count, WeightSet weights)
    : arc_count_(arc_count), weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("flow matrix needs at least one weight");
    values_.assign(std::size_t(arc_count_) * weights_.size(), 0.0);
}

std::vector<double> FlowMatrix::column(int col) const {
    std::vector<double> out(arc_count_);
    for (int a = 0; a < arc_count_; ++a) out[a] = at(a, col);
    return out;
}

std::vector<std::pair<int, double>> assignment_flows(const Path& path, int demand) {
    if (demand < 1) throw std::invalid_argument("demand must be at least one");
    std::vector<std::pair<int, double>> out;
    out.reserve(path.arcs.size());
    for (int arc_index : path.arcs) out.emplace_back(arc_index, double(demand));
    return out;
}

std::vector<double> compute_flow_column(const MultiCostNetwork& network,
                                        const WeightVector& p,
                                        const std::vector<ODPair>& od_pairs) {
    const auto costs = combined_costs(network, p);
    std::vector<double> column(network.arc_count(), 0.0);
    std::map<int, ShortestPathTree> trees;
    for (const ODPair& od : od_pairs) {
        auto it = trees.find(od.origin);
        if (it == trees.end()) {
            it = trees.emplace(od.origin, dijkstra(network, costs, od.origin)).first;
        }
        const Path path = extract_path(network, it->second, od.destination);
        for (int arc_index : path.arcs) column[arc_index] += double(od.demand);
    }
    return column;
}

FlowMatrix build_flow_matrix(const MultiCostNetwork& network, const WeightSet& weights,
                             const std::vector<ODPair>& od_pairs) {
    FlowMatrix matrix(network.arc_count(), weights);
    for (int l = 0; l < weights.size(); ++l) {
        const auto column = compute_flow_column(network, weights[l], od_pairs);
        for (int a = 0; a < network.arc_count(); ++a) matrix.at(a, l) = column[a];
    }
    return matrix;
}

std::vector<double> aggregate_flows(const FlowMatrix& matrix,
                                    const std::vector<double>& alpha) {
    if (static_cast<int>(alpha.size()) != matrix.weight_count()) {
        throw std::invalid_argument("alpha length does not match weight count");
    }
    std::vector<double> x(matrix.arc_count());
    for (int a = 0; a < matrix.arc_count(); ++a) {
        double s = 0.0;
        for (int l = 0; l < matrix.weight_count(); ++l) s += matrix.at(a, l) * alpha[l];
        x[a] = s;
    }
    return x;
}

ConservationReport conservation_check(const MultiCostNetwork& network,
                                      const std::vector<double>& arc_flows,
                                      double alpha_weight,
                                      const std::vector<ODPair>& od_pairs) {
    if (static_cast<int>(arc_flows.size()) != network.arc_count()) {
        throw std::invalid_argument("flow vector length does not match arc count");
    }
    std::vector<double> net_outflow(network.node_count(), 0.0);
    for (int a = 0; a < network.arc_count(); ++a) {
        net_outflow[network.arc(a).tail] += arc_flows[a];
        net_outflow[network.arc(a).head] -= arc_flows[a];
    }
    std::vector<double> expected(network.node_count(), 0.0);
    for (const ODPair& od : od_pairs) {
        expected[od.origin] += alpha_weight * od.demand;
        expected[od.destination] -= alpha_weight * od.demand;
    }
    ConservationReport report;
    for (int i = 0; i < network.node_count(); ++i) {
        if (std::abs(net_outflow[i] - expected[i]) > 1e-9) {
            report.violating_nodes.push_back(i);
        }
    }
    return report;
}

}  // namespace cyclid
