#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "cyclid/flow_model.hpp"
#include "cyclid/network.hpp"
#include "cyclid/qp_solver.hpp"
#include "cyclid/weights.hpp"

namespace cyclid {

/// One fitting problem: a validated network, the demand list, and the
/// observed flows on the measured arc subset.
struct Instance {
    MultiCostNetwork network;
    std::vector<ODPair> od_pairs;
    MeasuredFlows measured;
};

struct IdentificationResult {
    WeightSet weight_set;
    std::vector<double> alpha;
    double g_value = 0.0;
    // Flow matrix restricted to the measured arcs; rows follow the measured
    // arc list, columns the weight set order. Retained for reuse.
    FlowMatrix flow_matrix;
};

/// Fits the mixing probabilities of a candidate weight set against the
/// observed flows: one shortest path per (O-D pair, weight), flow matrix
/// assembly, then least squares over the probability simplex.
///
/// The engine is built once per instance and reused across many weight sets.
/// Per-weight flow columns are cached keyed by the quantized weight vector,
/// so a call only solves shortest paths for weights it has never seen.
/// Whole results are cached per (ordered) weight set, which also makes
/// repeated calls bit-identical. Safe to call from multiple threads.
class IdentificationEngine {
public:
    // Throws std::invalid_argument when the network fails validation, the
    // measured flows do not fit it, or a demand entry is malformed.
    explicit IdentificationEngine(Instance instance);

    IdentificationResult identify(const WeightSet& weights);

    const Instance& instance() const { return instance_; }

    // Instrumentation. Seconds are cumulative wall-clock time spent in
    // shortest-path work and in the simplex least-squares solve;
    // sp_solve_count counts per-O-D shortest path solutions.
    double sp_seconds() const;
    double qp_seconds() const;
    long sp_solve_count() const;
    long column_cache_hits() const;
    long column_cache_misses() const;
    long result_cache_hits() const;
    void reset_counters();

private:
    struct SlimResult {
        std::vector<double> alpha;
        double g_value;
    };

    // Restricted flow column of a single weight (one entry per measured arc).
    std::vector<double> column_for(const WeightVector& p);
    IdentificationResult assemble(const WeightSet& weights, const SlimResult& slim);

    Instance instance_;

    mutable std::mutex mutex_;
    std::map<std::vector<std::int64_t>, std::vector<double>> column_cache_;
    std::map<std::vector<std::vector<std::int64_t>>, SlimResult> result_cache_;
    // alpha of the most recent solve, per weight; used as the warm start.
    std::map<std::vector<std::int64_t>, double> last_alpha_;

    double sp_seconds_ = 0.0;
    double qp_seconds_ = 0.0;
    long sp_solve_count_ = 0;
    long column_hits_ = 0;
    long column_misses_ = 0;
    long result_hits_ = 0;
};

/// Convenience wrapper for one-off calls: builds an engine and runs a single
/// identify. Prefer a shared engine when evaluating many weight sets.
IdentificationResult identify_once(Instance instance, const WeightSet& weights);

}  // namespace cyclid
