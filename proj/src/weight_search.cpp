#include "cyclid/weight_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cyclid {

void SearchConfig::check() const {
    if (!(tol1 > 0.0) || tol1 > 1.0) throw std::invalid_argument("tol1 must be in (0,1]");
    if (!(tol2 > 0.0) || tol2 >= 1.0) throw std::invalid_argument("tol2 must be in (0,1)");
    if (!(tol3 > 0.0) || tol3 > 1.0) throw std::invalid_argument("tol3 must be in (0,1]");
    if (!(epsilon0 > 0.0)) throw std::invalid_argument("epsilon0 must be positive");
    if (grid_resolution < 1) throw std::invalid_argument("grid_resolution must be >= 1");
    if (!(cluster_cutoff > 0.0)) throw std::invalid_argument("cluster_cutoff must be positive");
    if (max_outer_iterations < 1) {
        throw std::invalid_argument("max_outer_iterations must be >= 1");
    }
}

WeightSet initial_grid(int r, int resolution) {
    if (r < 1) throw std::invalid_argument("dimension must be >= 1");
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
    WeightSet grid;
    std::vector<int> counts(r, 0);
    // Enumerate lattice compositions with the first coordinate ascending.
    auto emit = [&](auto&& self, int h, int remaining) -> void {
        if (h == r - 1) {
            counts[h] = remaining;
            std::vector<double> coords(r);
            for (int i = 0; i < r; ++i) coords[i] = double(counts[i]) / resolution;
            grid.insert(WeightVector(std::move(coords)));
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            counts[h] = k;
            self(self, h + 1, remaining - k);
        }
    };
    emit(emit, 0, resolution);
    return grid;
}

namespace {

std::vector<std::vector<double>> neighborhood_directions(int r) {
    std::vector<std::vector<double>> dirs;
    if (r == 3) {
        for (int i = -1; i <= 1; ++i) {
            for (int j = -1; j <= 1; ++j) {
                if (i == 0 && j == 0) continue;
                dirs.push_back({double(i), double(j), double(-i - j)});
            }
        }
    } else {
        for (int a = 0; a < r; ++a) {
            for (int b = 0; b < r; ++b) {
                if (a == b) continue;
                std::vector<double> d(r, 0.0);
                d[a] = 1.0;
                d[b] = -1.0;
                dirs.push_back(std::move(d));
            }
        }
    }
    return dirs;
}

}  // namespace

WeightSet perturbation(const WeightSet& base, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    WeightSet out;
    if (base.empty()) return out;
    const int r = base[0].dimension();
    const auto dirs = neighborhood_directions(r);
    for (const auto& p : base) {
        for (const auto& dir : dirs) {
            std::vector<double> coords(r);
            bool feasible = true;
            for (int h = 0; h < r; ++h) {
                coords[h] = p[h] + dir[h] * step;
                if (coords[h] < -1e-12) {
                    feasible = false;
                    break;
                }
                if (coords[h] < 0.0) coords[h] = 0.0;
            }
            if (feasible) out.insert(WeightVector(std::move(coords)));
        }
    }
    return out;
}

WeightSet prune(const WeightSet& current, const WeightSet& kept, double threshold) {
    WeightSet out;
    for (const auto& p : current) {
        if (kept.contains(p)) continue;
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& k : kept) nearest = std::min(nearest, p.distance_to(k));
        if (nearest > threshold) out.insert(p);
    }
    return out;
}

RefineOutcome refine_loop(IdentificationEngine& engine, const SearchConfig& config) {
    config.check();
    const int r = engine.instance().network.criteria_count();
    WeightSet current = initial_grid(r, config.grid_resolution);
    auto result = engine.identify(current);

    std::vector<RefineRecord> trace;
    trace.push_back({1, config.epsilon0, current.size(), result.g_value});
    double epsilon = config.epsilon0;
    int t = 1;

    while (t < config.max_outer_iterations) {
        WeightSet support;
        for (int l = 0; l < current.size(); ++l) {
            if (result.alpha[l] > epsilon) support.insert(current[l]);
        }
        if (support.empty()) {
            const auto best =
                std::max_element(result.alpha.begin(), result.alpha.end());
            support.insert(current[int(best - result.alpha.begin())]);
        }

        const auto fresh = perturbation(support, std::ldexp(1.0, -t));
        const auto stale = prune(current, support, std::ldexp(1.0, -(t - 1)));
        WeightSet next;
        bool added_new = false;
        for (const auto& p : current) {
            if (!stale.contains(p)) next.insert(p);
        }
        for (const auto& p : fresh) {
            if (stale.contains(p)) continue;
            if (!current.contains(p)) added_new = true;
            next.insert(p);
        }

        auto next_result = engine.identify(next);
        const double g_prev = result.g_value;
        const double g_new = next_result.g_value;
        epsilon *= 2.0;
        ++t;
        trace.push_back({t, epsilon, next.size(), g_new});
        current = std::move(next);
        result = std::move(next_result);

        bool stop;
        if (config.stopping_rule == StoppingRule::improvement_based) {
            stop = epsilon >= config.tol1 ||
                   (added_new && g_new > config.tol2 * g_prev);
        } else {
            stop = epsilon < config.tol1 && g_new <= config.tol2 * g_prev;
        }
        if (stop) break;
    }
    return {std::move(current), std::move(result.alpha), result.g_value, std::move(trace)};
}

namespace {

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

std::vector<Cluster> find_clusters(const WeightSet& weights,
                                   const std::vector<double>& alpha, double cutoff) {
    const int n = weights.size();
    if (n == 0) throw std::invalid_argument("cannot cluster an empty weight set");
    if (static_cast<int>(alpha.size()) != n) {
        throw std::invalid_argument("alpha length does not match weight count");
    }
    if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff must be positive");

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (weights[i].distance_to(weights[j]) < cutoff) {
                parent[find_root(parent, i)] = find_root(parent, j);
            }
        }
    }

    // Group members by component, clusters ordered by smallest member index.
    std::vector<std::vector<int>> groups;
    std::vector<int> group_of(n, -1);
    for (int i = 0; i < n; ++i) {
        const int root = find_root(parent, i);
        if (group_of[root] < 0) {
            group_of[root] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[group_of[root]].push_back(i);
    }

    const int r = weights[0].dimension();
    std::vector<Cluster> clusters;
    clusters.reserve(groups.size());
    for (auto& members : groups) {
        double mass = 0.0;
        std::vector<double> center(r, 0.0);
        for (int idx : members) mass += alpha[idx];
        if (mass > 0.0) {
            for (int idx : members) {
                for (int h = 0; h < r; ++h) center[h] += alpha[idx] * weights[idx][h] / mass;
            }
        } else {
            for (int idx : members) {
                for (int h = 0; h < r; ++h) center[h] += weights[idx][h] / members.size();
            }
        }
        WeightVector barycenter{std::move(center)};
        double radius = 0.0;
        for (int idx : members) radius = std::max(radius, weights[idx].distance_to(barycenter));
        clusters.push_back({std::move(members), std::move(barycenter), radius});
    }
    return clusters;
}

LocalSearchStep local_search(IdentificationEngine& engine, const WeightSet& current,
                             int slot, double rho) {
    if (slot < 0 || slot >= current.size()) throw std::invalid_argument("slot out of range");
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");

    const auto base = engine.identify(current);
    WeightSet seed;
    seed.insert(current[slot]);
    const auto neighbors = perturbation(seed, rho);

    double best_g = base.g_value;
    bool improved = false;
    WeightSet best_set;
    std::vector<double> best_alpha;
    WeightVector best_weight = current[slot];
    for (const auto& cand : neighbors) {
        WeightSet trial;
        for (int i = 0; i < current.size(); ++i) {
            if (i != slot) trial.insert(current[i]);
        }
        trial.insert(cand);
        auto res = engine.identify(trial);
        if (res.g_value < best_g) {
            best_g = res.g_value;
            best_set = std::move(trial);
            best_alpha = std::move(res.alpha);
            best_weight = cand;
            improved = true;
        }
    }

    if (improved) {
        return {std::move(best_set), rho, true, best_g, std::move(best_alpha),
                std::move(best_weight)};
    }
    return {current, rho / 2.0, false, base.g_value, base.alpha, current[slot]};
}

SearchResult search(IdentificationEngine& engine, const SearchConfig& config) {
    config.check();
    auto refined = refine_loop(engine, config);
    const auto clusters = find_clusters(refined.weights, refined.alpha, config.cluster_cutoff);

    WeightSet stars;
    std::vector<double> radii;
    for (const auto& c : clusters) {
        const int idx = stars.insert(c.barycenter);
        if (idx == static_cast<int>(radii.size())) {
            radii.push_back(c.radius);
        } else {
            radii[idx] = std::max(radii[idx], c.radius);  // identical barycenters merged
        }
    }
    const auto cluster_result = engine.identify(stars);

    SearchTrace trace;
    trace.g_initial = refined.trace.front().g;
    trace.g_after_refine = refined.g;
    trace.g_after_cluster = cluster_result.g_value;
    trace.refine_iterations = static_cast<int>(refined.trace.size());
    trace.cluster_count = static_cast<int>(clusters.size());
    trace.refine_records = refined.trace;

    WeightSet current = stars;
    for (int l = 0; l < stars.size(); ++l) {
        WeightVector slot_weight = stars[l];
        double rho = radii[l];
        while (rho > config.tol3) {
            const int idx = current.index_of(slot_weight);
            if (idx < 0) break;  // slot was absorbed by an earlier replacement
            auto step = local_search(engine, current, idx, rho);
            current = std::move(step.weights);
            rho = step.rho;
            slot_weight = std::move(step.slot_weight);
        }
    }

    const auto final_result = engine.identify(current);
    trace.g_final = final_result.g_value;
    return {std::move(current), final_result.alpha, final_result.g_value, std::move(trace)};
}

}  // namespace cyclid
