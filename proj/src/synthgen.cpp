#include "cyclid/synthgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "cyclid/flow_model.hpp"

namespace cyclid {

namespace {
constexpr long kMaxAttempts = 1000000;
}

int Rng::uniform_int(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int bounds out of order");
    const std::uint64_t span = std::uint64_t(hi) - std::uint64_t(lo) + 1;
    return lo + static_cast<int>(engine_() % span);
}

double Rng::uniform_real() { return double(engine_() >> 11) * 0x1.0p-53; }

std::vector<double> Rng::dirichlet_uniform(int r) {
    if (r < 1) throw std::invalid_argument("dimension must be >= 1");
    std::vector<double> v(r);
    for (long attempt = 0; attempt < kMaxAttempts; ++attempt) {
        double sum = 0.0;
        for (int h = 0; h < r; ++h) {
            v[h] = -std::log1p(-uniform_real());  // unit exponential
            sum += v[h];
        }
        if (sum > 0.0) {
            for (double& x : v) x /= sum;
            return v;
        }
    }
    throw std::runtime_error("simplex sampling failed");
}

void GeneratorParams::check() const {
    if (grid_side < 2) throw std::invalid_argument("grid_side must be >= 2");
    if (num_od < 1) throw std::invalid_argument("num_od must be >= 1");
    const long nodes = long(grid_side) * grid_side;
    if (long(num_od) > nodes * (nodes - 1)) {
        throw std::invalid_argument("num_od exceeds the number of distinct O-D pairs");
    }
    if (demand < 1) throw std::invalid_argument("demand must be >= 1");
    if (criteria < 1) throw std::invalid_argument("criteria must be >= 1");
    if (true_weight_count < 1) throw std::invalid_argument("true_weight_count must be >= 1");
    if (cost_min < 1 || cost_min > cost_max) {
        throw std::invalid_argument("cost range must satisfy 1 <= cost_min <= cost_max");
    }
    if (!(measured_fraction > 0.0) || measured_fraction > 1.0) {
        throw std::invalid_argument("measured_fraction must be in (0,1]");
    }
}

MultiCostNetwork make_grid_network(int side, int criteria, int cost_min, int cost_max,
                                   Rng& rng) {
    if (side < 2) throw std::invalid_argument("side must be >= 2");
    if (criteria < 1) throw std::invalid_argument("criteria must be >= 1");
    if (cost_min < 1 || cost_min > cost_max) {
        throw std::invalid_argument("cost range must satisfy 1 <= cost_min <= cost_max");
    }

    std::vector<Arc> arcs;
    for (int row = 0; row < side; ++row) {
        for (int col = 0; col < side; ++col) {
            const int node = row * side + col;
            if (col + 1 < side) {
                arcs.push_back({node, node + 1});
                arcs.push_back({node + 1, node});
            }
            if (row + 1 < side) {
                arcs.push_back({node, node + side});
                arcs.push_back({node + side, node});
            }
        }
    }

    const int m = static_cast<int>(arcs.size());
    std::vector<std::vector<double>> costs(criteria, std::vector<double>(m));
    for (int h = 0; h < criteria; ++h) {
        for (int a = 0; a < m; ++a) costs[h][a] = rng.uniform_int(cost_min, cost_max);
    }

    MultiCostNetwork network(side * side, criteria);
    std::vector<double> per_arc(criteria);
    for (int a = 0; a < m; ++a) {
        for (int h = 0; h < criteria; ++h) per_arc[h] = costs[h][a];
        network.add_arc(arcs[a].tail, arcs[a].head, per_arc);
    }
    return network;
}

std::pair<Instance, GroundTruth> generate_instance(const GeneratorParams& params) {
    params.check();
    Rng rng(params.seed);

    auto raw = make_grid_network(params.grid_side, params.criteria, params.cost_min,
                                 params.cost_max, rng);
    auto network = normalize_costs(raw);

    WeightSet truth;
    long attempts = 0;
    while (truth.size() < params.true_weight_count) {
        if (++attempts > kMaxAttempts) {
            throw std::runtime_error("true-weight sampling exceeded the attempt limit");
        }
        WeightVector cand(rng.dirichlet_uniform(params.criteria));
        bool separated = true;
        for (const auto& w : truth) {
            if (cand.distance_to(w) < 0.05) {
                separated = false;
                break;
            }
        }
        if (separated) truth.insert(cand);
    }

    std::vector<double> alpha;
    attempts = 0;
    while (alpha.empty()) {
        if (++attempts > kMaxAttempts) {
            throw std::runtime_error("alpha sampling exceeded the attempt limit");
        }
        auto cand = rng.dirichlet_uniform(params.true_weight_count);
        if (std::all_of(cand.begin(), cand.end(), [](double v) { return v >= 0.05; })) {
            alpha = std::move(cand);
        }
    }

    const int n = network.node_count();
    std::vector<ODPair> od_pairs;
    od_pairs.reserve(params.num_od);
    std::set<std::pair<int, int>> seen;
    attempts = 0;
    while (static_cast<int>(od_pairs.size()) < params.num_od) {
        if (++attempts > kMaxAttempts) {
            throw std::runtime_error("O-D sampling exceeded the attempt limit");
        }
        const int origin = rng.uniform_int(0, n - 1);
        const int destination = rng.uniform_int(0, n - 1);
        if (origin == destination) continue;
        if (!seen.insert({origin, destination}).second) continue;
        od_pairs.push_back({origin, destination, params.demand});
    }

    const int m = network.arc_count();
    std::vector<double> flows(m, 0.0);
    for (int l = 0; l < truth.size(); ++l) {
        const auto column = compute_flow_column(network, truth[l], od_pairs);
        for (int a = 0; a < m; ++a) flows[a] += alpha[l] * column[a];
    }

    const int measured_count = static_cast<int>(std::llround(params.measured_fraction * m));
    if (measured_count < 1) {
        throw std::invalid_argument("measured_fraction rounds to zero measured arcs");
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    for (int i = 0; i < measured_count; ++i) {
        std::swap(order[i], order[rng.uniform_int(i, m - 1)]);
    }
    std::vector<int> chosen(order.begin(), order.begin() + measured_count);
    std::sort(chosen.begin(), chosen.end());
    std::vector<std::pair<int, double>> entries;
    entries.reserve(chosen.size());
    for (int a : chosen) entries.push_back({a, flows[a]});

    Instance instance{std::move(network), std::move(od_pairs),
                      MeasuredFlows::from_pairs(std::move(entries))};
    GroundTruth ground_truth{std::move(truth), std::move(alpha), params.seed};
    return {std::move(instance), std::move(ground_truth)};
}

RecoveryMatch recovery_distance(const WeightSet& true_set, const WeightSet& estimated) {
    if (true_set.empty() || estimated.empty()) {
        throw std::invalid_argument("both weight sets must be non-empty");
    }
    if (true_set[0].dimension() != estimated[0].dimension()) {
        throw std::invalid_argument("weight dimensions differ");
    }
    const int nt = true_set.size();
    const int ne = estimated.size();
    const bool small_is_true = nt <= ne;
    const int k = small_is_true ? nt : ne;
    const int big = small_is_true ? ne : nt;
    if (k > 20 || big > 64) {
        throw std::invalid_argument("matching supports at most 20x64 weights");
    }

    auto pair_distance = [&](int big_index, int small_index) {
        return small_is_true ? estimated[big_index].distance_to(true_set[small_index])
                             : true_set[big_index].distance_to(estimated[small_index]);
    };

    // Subset DP over the smaller side: walk the larger side in index order,
    // each member either takes an unused small-side partner or is skipped.
    const int full = 1 << k;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(full, inf);
    dp[0] = 0.0;
    std::vector<std::vector<std::int8_t>> choice(big, std::vector<std::int8_t>(full, -2));
    for (int i = 0; i < big; ++i) {
        std::vector<double> next(full, inf);
        auto& ch = choice[i];
        for (int mask = 0; mask < full; ++mask) {
            if (dp[mask] == inf) continue;
            const int assigned = std::popcount(unsigned(mask));
            if (big - i - 1 >= k - assigned && dp[mask] < next[mask]) {
                next[mask] = dp[mask];
                ch[mask] = -1;
            }
            for (int j = 0; j < k; ++j) {
                if (mask & (1 << j)) continue;
                const double cost = dp[mask] + pair_distance(i, j);
                const int nm = mask | (1 << j);
                if (cost < next[nm]) {
                    next[nm] = cost;
                    ch[nm] = static_cast<std::int8_t>(j);
                }
            }
        }
        dp = std::move(next);
    }

    std::vector<int> partner(big, -1);
    int mask = full - 1;
    for (int i = big - 1; i >= 0; --i) {
        const std::int8_t c = choice[i][mask];
        if (c >= 0) {
            partner[i] = c;
            mask &= ~(1 << c);
        }
    }

    RecoveryMatch out;
    for (int i = 0; i < big; ++i) {
        if (partner[i] < 0) {
            (small_is_true ? out.unmatched_estimated : out.unmatched_true).push_back(i);
            continue;
        }
        const int ti = small_is_true ? partner[i] : i;
        const int ei = small_is_true ? i : partner[i];
        out.pairs.push_back({ti, ei});
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    out.distances.reserve(out.pairs.size());
    for (const auto& [ti, ei] : out.pairs) {
        out.distances.push_back(true_set[ti].distance_to(estimated[ei]));
    }
    return out;
}

}  // namespace cyclid
