#include "cyclid/identification.hpp"

#include <chrono>
#include <stdexcept>
#include <string>
#include <utility>

namespace cyclid {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::vector<std::int64_t>> result_key(const WeightSet& weights) {
    std::vector<std::vector<std::int64_t>> key;
    key.reserve(weights.size());
    for (const auto& w : weights) key.push_back(w.quantized());
    return key;
}

}  // namespace

IdentificationEngine::IdentificationEngine(Instance instance)
    : instance_(std::move(instance)) {
    const auto report = validate(instance_.network);
    if (!report.strongly_connected) {
        throw std::invalid_argument("network is not strongly connected");
    }
    if (!report.costs_strictly_positive) {
        throw std::invalid_argument("network has a non-positive basic cost");
    }
    if (!report.normalized) {
        throw std::invalid_argument("network costs are not normalized");
    }
    instance_.measured.check(instance_.network.arc_count());
    if (instance_.od_pairs.empty()) {
        throw std::invalid_argument("instance has no O-D pairs");
    }
    const int n = instance_.network.node_count();
    for (const auto& od : instance_.od_pairs) {
        if (od.origin < 0 || od.origin >= n || od.destination < 0 || od.destination >= n) {
            throw std::invalid_argument("O-D pair references a node out of range");
        }
        if (od.origin == od.destination) {
            throw std::invalid_argument("O-D pair with equal origin and destination");
        }
        if (od.demand < 1) {
            throw std::invalid_argument("O-D demand must be at least 1");
        }
    }
}

std::vector<double> IdentificationEngine::column_for(const WeightVector& p) {
    const auto key = p.quantized();
    {
        std::lock_guard lock(mutex_);
        auto it = column_cache_.find(key);
        if (it != column_cache_.end()) {
            ++column_hits_;
            return it->second;
        }
    }

    const auto start = std::chrono::steady_clock::now();
    const auto full = compute_flow_column(instance_.network, p, instance_.od_pairs);
    std::vector<double> restricted(instance_.measured.arcs.size());
    for (std::size_t i = 0; i < restricted.size(); ++i) {
        restricted[i] = full[instance_.measured.arcs[i]];
    }
    const double elapsed = seconds_since(start);

    std::lock_guard lock(mutex_);
    ++column_misses_;
    sp_seconds_ += elapsed;
    sp_solve_count_ += static_cast<long>(instance_.od_pairs.size());
    column_cache_.emplace(key, restricted);
    return restricted;
}

IdentificationResult IdentificationEngine::assemble(const WeightSet& weights,
                                                    const SlimResult& slim) {
    const int rows = instance_.measured.size();
    FlowMatrix matrix(rows, weights);
    for (int l = 0; l < weights.size(); ++l) {
        const auto col = column_for(weights[l]);
        for (int i = 0; i < rows; ++i) matrix.at(i, l) = col[i];
    }
    return IdentificationResult{weights, slim.alpha, slim.g_value, std::move(matrix)};
}

IdentificationResult IdentificationEngine::identify(const WeightSet& weights) {
    if (weights.empty()) throw std::invalid_argument("cannot identify an empty weight set");
    for (const auto& w : weights) {
        if (w.dimension() != instance_.network.criteria_count()) {
            throw std::invalid_argument("weight dimension does not match criteria count");
        }
    }

    const auto key = result_key(weights);
    {
        SlimResult slim{{}, 0.0};
        bool hit = false;
        {
            std::lock_guard lock(mutex_);
            auto it = result_cache_.find(key);
            if (it != result_cache_.end()) {
                ++result_hits_;
                slim = it->second;
                hit = true;
            }
        }
        if (hit) return assemble(weights, slim);
    }

    const int q = weights.size();
    const int rows = instance_.measured.size();
    SimplexLSProblem problem;
    problem.rows = rows;
    problem.cols = q;
    problem.matrix.resize(std::size_t(rows) * q);
    problem.target = instance_.measured.flows;
    for (int l = 0; l < q; ++l) {
        const auto col = column_for(weights[l]);
        for (int i = 0; i < rows; ++i) problem.matrix[std::size_t(i) * q + l] = col[i];
    }

    SolveOptions options;
    {
        std::lock_guard lock(mutex_);
        if (!last_alpha_.empty()) {
            options.warm_start.assign(q, 0.0);
            for (int l = 0; l < q; ++l) {
                auto it = last_alpha_.find(key[l]);
                if (it != last_alpha_.end()) options.warm_start[l] = it->second;
            }
        }
    }

    const auto start = std::chrono::steady_clock::now();
    const auto solution = solve_simplex_ls(problem, options);
    const double elapsed = seconds_since(start);

    SlimResult slim{solution.alpha, solution.objective};
    {
        std::lock_guard lock(mutex_);
        qp_seconds_ += elapsed;
        result_cache_.emplace(key, slim);
        last_alpha_.clear();
        for (int l = 0; l < q; ++l) last_alpha_[key[l]] = solution.alpha[l];
    }
    return assemble(weights, slim);
}

double IdentificationEngine::sp_seconds() const {
    std::lock_guard lock(mutex_);
    return sp_seconds_;
}

double IdentificationEngine::qp_seconds() const {
    std::lock_guard lock(mutex_);
    return qp_seconds_;
}

long IdentificationEngine::sp_solve_count() const {
    std::lock_guard lock(mutex_);
    return sp_solve_count_;
}

long IdentificationEngine::column_cache_hits() const {
    std::lock_guard lock(mutex_);
    return column_hits_;
}

long IdentificationEngine::column_cache_misses() const {
    std::lock_guard lock(mutex_);
    return column_misses_;
}

long IdentificationEngine::result_cache_hits() const {
    std::lock_guard lock(mutex_);
    return result_hits_;
}

void IdentificationEngine::reset_counters() {
    std::lock_guard lock(mutex_);
    sp_seconds_ = 0.0;
    qp_seconds_ = 0.0;
    sp_solve_count_ = 0;
    column_hits_ = 0;
    column_misses_ = 0;
    result_hits_ = 0;
}

IdentificationResult identify_once(Instance instance, const WeightSet& weights) {
    IdentificationEngine engine(std::move(instance));
    return engine.identify(weights);
}

}  // namespace cyclid
