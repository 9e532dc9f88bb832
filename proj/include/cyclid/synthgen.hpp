#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cyclid/identification.hpp"
#include "cyclid/network.hpp"
#include "cyclid/weights.hpp"

namespace cyclid {

/// Seedable random source with fixed, documented draw mappings so that
/// generated instances are reproducible bit for bit:
///   uniform_int(lo, hi) = lo + raw() % (hi - lo + 1)   (inclusive bounds)
///   uniform_real()      = (raw() >> 11) * 2^-53        (in [0, 1))
///   dirichlet_uniform   = per-coordinate -log(1 - U), normalized to sum 1
/// The engine is std::mt19937_64, which the standard pins exactly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    int uniform_int(int lo, int hi);
    double uniform_real();

    // Uniform draw on the r-dimensional unit simplex.
    std::vector<double> dirichlet_uniform(int r);

private:
    std::mt19937_64 engine_;
};

struct GeneratorParams {
    int grid_side = 40;
    int num_od = 1000;
    int demand = 10;
    int criteria = 3;
    int true_weight_count = 5;
    int cost_min = 5;
    int cost_max = 20;
    double measured_fraction = 0.4;
    std::uint64_t seed = 0;

    void check() const;
};

/// The weights and probabilities an instance was generated from.
struct GroundTruth {
    WeightSet weights;
    std::vector<double> alpha;
    std::uint64_t seed = 0;
};

/// Bidirected grid of side*side nodes; each undirected lattice edge yields
/// two arcs with independently drawn integer costs in [cost_min, cost_max].
/// Node (row, col) has index row*side + col; per node the arc order is
/// right-forward, right-backward, down-forward, down-backward. Costs are
/// drawn criterion by criterion over all arcs, from `rng`, before
/// normalization is applied by the caller.
MultiCostNetwork make_grid_network(int side, int criteria, int cost_min, int cost_max,
                                   Rng& rng);

/// Builds a full synthetic instance. Draw order: arc costs, true weights
/// (rejection until pairwise distances >= 0.05), alpha (rejection until all
/// entries >= 0.05), O-D pairs (distinct, origin != destination), measured
/// arc subset (partial shuffle, then sorted). Flows are exact: every user
/// group routes on its shortest paths and the mixture is observed on the
/// measured arcs. Throws std::runtime_error when rejection sampling exceeds
/// one million attempts.
std::pair<Instance, GroundTruth> generate_instance(const GeneratorParams& params);

/// Minimum-total-distance one-to-one matching between two weight sets.
/// With unequal sizes every member of the smaller set is matched and the
/// leftovers are listed as unmatched.
struct RecoveryMatch {
    std::vector<std::pair<int, int>> pairs;  // (true index, estimated index)
    std::vector<double> distances;           // parallel to pairs
    std::vector<int> unmatched_true;
    std::vector<int> unmatched_estimated;
};

RecoveryMatch recovery_distance(const WeightSet& true_set, const WeightSet& estimated);

}  // namespace cyclid
