#include "cyclid/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cyclid {

MultiCostNetwork::MultiCostNetwork(int node_count, int criteria_count)
    : node_count_(node_count), criteria_count_(criteria_count) {
    if (node_count < 1) throw std::invalid_argument("node count must be positive");
    if (criteria_count < 1) throw std::invalid_argument("criteria count must be positive");
    basic_costs_.resize(criteria_count);
    out_arcs_.resize(node_count);
}

int MultiCostNetwork::add_arc(int tail, int head, const std::vector<double>& costs) {
    if (tail < 0 || tail >= node_count_ || head < 0 || head >= node_count_) {
        throw std::invalid_argument("arc endpoint out of range");
    }
    if (tail == head) {
        throw std::invalid_argument("self-loop rejected: node " + std::to_string(tail));
    }
    if (static_cast<int>(costs.size()) != criteria_count_) {
        throw std::invalid_argument("expected " + std::to_string(criteria_count_) +
                                    " costs per arc, got " + std::to_string(costs.size()));
    }
    for (double c : costs) {
        if (!(c >= 0.0)) throw std::invalid_argument("negative basic cost");
    }
    const int index = static_cast<int>(arcs_.size());
    arcs_.push_back({tail, head});
    for (int h = 0; h < criteria_count_; ++h) basic_costs_[h].push_back(costs[h]);
    out_arcs_[tail].push_back(index);
    return index;
}

MeasuredFlows MeasuredFlows::from_pairs(std::vector<std::pair<int, double>> entries) {
    std::sort(entries.begin(), entries.end());
    MeasuredFlows mf;
    mf.arcs.reserve(entries.size());
    mf.flows.reserve(entries.size());
    for (const auto& [arc, flow] : entries) {
        if (!mf.arcs.empty() && mf.arcs.back() == arc) {
            throw std::invalid_argument("duplicate measured arc " + std::to_string(arc));
        }
        mf.arcs.push_back(arc);
        mf.flows.push_back(flow);
    }
    return mf;
}

void MeasuredFlows::check(int arc_count) const {
    if (arcs.empty()) throw std::invalid_argument("measured arc set is empty");
    if (arcs.size() != flows.size()) {
        throw std::invalid_argument("measured arcs and flows differ in length");
    }
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        if (arcs[i] < 0 || arcs[i] >= arc_count) {
            throw std::invalid_argument("measured arc index out of range: " +
                                        std::to_string(arcs[i]));
        }
        if (!(flows[i] >= 0.0)) {
            throw std::invalid_argument("negative measured flow on arc " +
                                        std::to_string(arcs[i]));
        }
    }
}

MultiCostNetwork normalize_costs(const MultiCostNetwork& network) {
    std::vector<double> sums(network.criteria_count(), 0.0);
    for (int h = 0; h < network.criteria_count(); ++h) {
        for (double c : network.costs_for(h)) sums[h] += c;
    }
    for (int h = 0; h < network.criteria_count(); ++h) {
        if (sums[h] <= 0.0) {
            throw std::invalid_argument("degenerate criterion " + std::to_string(h) +
                                        ": all costs are zero");
        }
    }
    MultiCostNetwork result = network;
    // Anchor every criterion's sum to the first criterion's raw sum.
    for (int h = 1; h < result.criteria_count_; ++h) {
        const double scale = sums[0] / sums[h];
        for (double& c : result.basic_costs_[h]) c *= scale;
    }
    return result;
}

namespace {

// Reachability of every node from node 0, following arcs forward or backward.
bool all_reachable(const MultiCostNetwork& network, bool reverse) {
    const int n = network.node_count();
    std::vector<std::vector<int>> adj(n);
    for (const Arc& a : network.arcs()) {
        if (reverse) {
            adj[a.head].push_back(a.tail);
        } else {
            adj[a.tail].push_back(a.head);
        }
    }
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == n;
}

}  // namespace

ValidationReport validate(const MultiCostNetwork& network) {
    ValidationReport report;
    report.strongly_connected =
        network.arc_count() > 0 && all_reachable(network, false) && all_reachable(network, true);

    report.costs_strictly_positive = true;
    for (int h = 0; h < network.criteria_count() && report.costs_strictly_positive; ++h) {
        for (double c : network.costs_for(h)) {
            if (!(c > 0.0)) {
                report.costs_strictly_positive = false;
                break;
            }
        }
    }

    std::vector<double> sums(network.criteria_count(), 0.0);
    for (int h = 0; h < network.criteria_count(); ++h) {
        for (double c : network.costs_for(h)) sums[h] += c;
    }
    report.normalized = true;
    for (int h = 1; h < network.criteria_count(); ++h) {
        const double scale = std::max(std::abs(sums[0]), std::abs(sums[h]));
        if (std::abs(sums[h] - sums[0]) > 1e-12 * scale) {
            report.normalized = false;
            break;
        }
    }
    return report;
}

double combined_arc_cost(const MultiCostNetwork& network, int arc_index,
                         const WeightVector& p) {
    if (p.dimension() != network.criteria_count()) {
        throw std::invalid_argument("weight dimension does not match criteria count");
    }
    double s = 0.0;
    for (int h = 0; h < network.criteria_count(); ++h) {
        s += network.cost(h, arc_index) * p[h];
    }
    return s;
}

std::vector<double> combined_costs(const MultiCostNetwork& network, const WeightVector& p) {
    if (p.dimension() != network.criteria_count()) {
        throw std::invalid_argument("weight dimension does not match criteria count");
    }
    const int m = network.arc_count();
    const int r = network.criteria_count();
    std::vector<double> out(m);
    for (int a = 0; a < m; ++a) {
        double s = 0.0;
        for (int h = 0; h < r; ++h) s += network.cost(h, a) * p[h];
        out[a] = s;
    }
    return out;
}

}  // namespace cyclid
