#pragma once

#include <vector>

#include "cyclid/identification.hpp"
#include "cyclid/weights.hpp"

namespace cyclid {

/// When the grid refinement loop decides to stop.
///
/// improvement_based (default): stop once the doubled threshold reaches tol1
/// or the latest objective failed to drop below tol2 times the previous one.
/// Iterations that introduced no new weights are exempt from the
/// improvement test: they cannot improve the objective, and with an
/// even-resolution starting grid the first perturbation step always lands
/// on existing lattice points.
/// conjunctive: the flipped reading, stop once the threshold is still below
/// tol1 AND the objective did drop by the tol2 factor.
enum class StoppingRule { improvement_based, conjunctive };

struct SearchConfig {
    double tol1 = 0.01;   // cap on the support threshold epsilon
    double tol2 = 0.85;   // required per-iteration objective reduction factor
    double tol3 = 0.005;  // local search stops once its step drops below this
    double epsilon0 = 1e-5;
    int grid_resolution = 2;
    double cluster_cutoff = 0.1;
    int max_outer_iterations = 30;
    StoppingRule stopping_rule = StoppingRule::improvement_based;

    // Throws std::invalid_argument on an out-of-range field.
    void check() const;
};

struct Cluster {
    std::vector<int> member_indices;
    WeightVector barycenter;
    double radius = 0.0;
};

/// State after one grid-refinement iteration: the iteration counter, the
/// support threshold in effect, the candidate set size, and its objective.
struct RefineRecord {
    int t = 0;
    double epsilon = 0.0;
    int set_size = 0;
    double g = 0.0;
};

struct RefineOutcome {
    WeightSet weights;
    std::vector<double> alpha;
    double g = 0.0;
    std::vector<RefineRecord> trace;
};

/// Result of one local-search call on a single slot. When a strictly better
/// replacement was found, `weights` holds it and `rho` is unchanged;
/// otherwise `weights` is the input set and `rho` was halved.
struct LocalSearchStep {
    WeightSet weights;
    double rho = 0.0;
    bool improved = false;
    double g = 0.0;
    std::vector<double> alpha;
    WeightVector slot_weight;  // weight occupying the searched slot afterwards
};

struct SearchTrace {
    double g_initial = 0.0;
    double g_after_refine = 0.0;
    double g_after_cluster = 0.0;
    double g_final = 0.0;
    int refine_iterations = 0;
    int cluster_count = 0;
    std::vector<RefineRecord> refine_records;
};

struct SearchResult {
    WeightSet weights;
    std::vector<double> alpha;
    double g = 0.0;
    SearchTrace trace;
};

/// Simplex lattice {p : p_h = k_h / resolution, sum k_h = resolution};
/// C(resolution + r - 1, r - 1) points, first coordinate ascending.
WeightSet initial_grid(int r, int resolution);

/// All neighbors of the given weights at the given step size that stay on
/// the simplex, without duplicates. For r = 3 the neighborhood uses the
/// eight directions (i, j, -i-j), i, j in {-1, 0, 1}; for other r it uses
/// the coordinate exchanges e_a - e_b.
WeightSet perturbation(const WeightSet& base, double step);

/// Members of `current` outside `kept` whose minimum distance to `kept`
/// strictly exceeds `threshold`. These are the candidates to delete.
WeightSet prune(const WeightSet& current, const WeightSet& kept, double threshold);

/// The grid refinement loop: filter the support by epsilon, perturb it with
/// step 1/2^t, drop stale far-away points, re-fit, double epsilon. Returns
/// the last fitted set plus one trace record per iteration.
RefineOutcome refine_loop(IdentificationEngine& engine, const SearchConfig& config);

/// Single-linkage clusters of the weights, merging while the closest
/// inter-cluster distance is below `cutoff`. Barycenters are the
/// probability-weighted member means (unweighted when a cluster carries no
/// mass); radius is the largest member distance to the barycenter.
std::vector<Cluster> find_clusters(const WeightSet& weights,
                                   const std::vector<double>& alpha, double cutoff);

/// Tries every neighbor of current[slot] at radius `rho` as a replacement
/// and adopts the best strictly improving one; halves rho when none improves.
LocalSearchStep local_search(IdentificationEngine& engine, const WeightSet& current,
                             int slot, double rho);

/// Full pipeline: refinement loop, clustering to barycenters, then local
/// search around every barycenter until its radius falls below tol3.
SearchResult search(IdentificationEngine& engine, const SearchConfig& config);

}  // namespace cyclid
