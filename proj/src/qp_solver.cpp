#include "cyclid/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cyclid {

void SimplexLSProblem::check() const {
    if (rows < 1 || cols < 1) throw std::invalid_argument("problem must have rows and cols >= 1");
    if (matrix.size() != std::size_t(rows) * cols) {
        throw std::invalid_argument("matrix storage does not match rows*cols");
    }
    if (static_cast<int>(target.size()) != rows) {
        throw std::invalid_argument("target length does not match rows");
    }
    for (double v : matrix) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite matrix entry");
    }
    for (double v : target) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite target entry");
    }
}

std::vector<double> project_onto_simplex(std::vector<double> v) {
    const int n = static_cast<int>(v.size());
    if (n == 0) throw std::invalid_argument("cannot project an empty vector");
    std::vector<double> u(v);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumulative = 0.0;
    double theta = u[0] - 1.0;
    for (int k = 1; k <= n; ++k) {
        cumulative += u[k - 1];
        const double candidate = (cumulative - 1.0) / k;
        if (u[k - 1] - candidate > 0.0) theta = candidate;
    }
    for (double& x : v) x = std::max(x - theta, 0.0);
    return v;
}

double objective_value(const SimplexLSProblem& problem, const std::vector<double>& alpha) {
    if (static_cast<int>(alpha.size()) != problem.cols) {
        throw std::invalid_argument("alpha length does not match problem cols");
    }
    double f = 0.0;
    for (int i = 0; i < problem.rows; ++i) {
        double r = -problem.target[i];
        for (int j = 0; j < problem.cols; ++j) r += problem.at(i, j) * alpha[j];
        f += r * r;
    }
    return f;
}

namespace {

// grad f(alpha) = 2 M^T (M alpha - target), computed from the residual.
std::vector<double> residual_gradient(const SimplexLSProblem& p,
                                      const std::vector<double>& alpha) {
    std::vector<double> grad(p.cols, 0.0);
    for (int i = 0; i < p.rows; ++i) {
        double r = -p.target[i];
        for (int j = 0; j < p.cols; ++j) r += p.at(i, j) * alpha[j];
        for (int j = 0; j < p.cols; ++j) grad[j] += 2.0 * p.at(i, j) * r;
    }
    return grad;
}

double kkt_residual_at(const std::vector<double>& alpha, const std::vector<double>& grad) {
    std::vector<double> step(alpha.size());
    for (std::size_t j = 0; j < alpha.size(); ++j) step[j] = alpha[j] - grad[j];
    const auto projected = project_onto_simplex(std::move(step));
    double r = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        r = std::max(r, std::abs(alpha[j] - projected[j]));
    }
    return r;
}

struct Factored {
    int q = 0;
    std::vector<double> gram;  // M^T M, q x q
    std::vector<double> mt_target;  // M^T target
    double target_sq = 0.0;

    double f(const std::vector<double>& alpha) const {
        double quad = 0.0, lin = 0.0;
        for (int j = 0; j < q; ++j) {
            double row = 0.0;
            for (int k = 0; k < q; ++k) row += gram[std::size_t(j) * q + k] * alpha[k];
            quad += alpha[j] * row;
            lin += mt_target[j] * alpha[j];
        }
        return quad - 2.0 * lin + target_sq;
    }

    std::vector<double> grad(const std::vector<double>& alpha) const {
        std::vector<double> g(q);
        for (int j = 0; j < q; ++j) {
            double row = 0.0;
            for (int k = 0; k < q; ++k) row += gram[std::size_t(j) * q + k] * alpha[k];
            g[j] = 2.0 * (row - mt_target[j]);
        }
        return g;
    }
};

Factored factorize(const SimplexLSProblem& p) {
    Factored f;
    f.q = p.cols;
    f.gram.assign(std::size_t(p.cols) * p.cols, 0.0);
    f.mt_target.assign(p.cols, 0.0);
    for (int i = 0; i < p.rows; ++i) {
        for (int j = 0; j < p.cols; ++j) {
            const double mij = p.at(i, j);
            if (mij == 0.0) continue;
            for (int k = j; k < p.cols; ++k) {
                f.gram[std::size_t(j) * p.cols + k] += mij * p.at(i, k);
            }
            f.mt_target[j] += mij * p.target[i];
        }
        f.target_sq += p.target[i] * p.target[i];
    }
    for (int j = 0; j < p.cols; ++j) {
        for (int k = 0; k < j; ++k) {
            f.gram[std::size_t(j) * p.cols + k] = f.gram[std::size_t(k) * p.cols + j];
        }
    }
    return f;
}

// Largest eigenvalue of 2 M^T M: power iteration (50 rounds, 1e-8 relative
// change), capped by the Gershgorin bound so the step size can never be
// based on an underestimate.
double lipschitz_estimate(const Factored& fac) {
    const int q = fac.q;
    double gershgorin = 0.0;
    for (int j = 0; j < q; ++j) {
        double row = 0.0;
        for (int k = 0; k < q; ++k) row += std::abs(fac.gram[std::size_t(j) * q + k]);
        gershgorin = std::max(gershgorin, row);
    }
    if (gershgorin <= 0.0) return 0.0;

    std::vector<double> v(q, 1.0 / std::sqrt(double(q)));
    double lambda = 0.0;
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> w(q, 0.0);
        for (int j = 0; j < q; ++j) {
            for (int k = 0; k < q; ++k) w[j] += fac.gram[std::size_t(j) * q + k] * v[k];
        }
        const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
        if (norm <= 0.0) break;
        const double next = norm;
        for (int j = 0; j < q; ++j) v[j] = w[j] / norm;
        if (lambda > 0.0 && std::abs(next - lambda) <= 1e-8 * next) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::min(2.0 * gershgorin, 2.02 * lambda);
}

// Householder QR with column pivoting; solves min ||A y - rhs|| for a dense
// column-major A (m x n, m >= 1). Rank-deficient columns are truncated.
std::vector<double> qr_least_squares(int m, int n, std::vector<double> a,
                                     std::vector<double> rhs) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> beta(n, 0.0);
    const int steps = std::min(m, n);

    auto col = [&](int j) { return a.data() + std::size_t(j) * m; };

    double max_diag = 0.0;
    int rank = steps;
    for (int k = 0; k < steps; ++k) {
        // Pivot on the largest remaining column norm.
        int best = k;
        double best_norm = -1.0;
        for (int j = k; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += col(j)[i] * col(j)[i];
            if (s > best_norm) {
                best_norm = s;
                best = j;
            }
        }
        if (best != k) {
            for (int i = 0; i < m; ++i) std::swap(col(k)[i], col(best)[i]);
            std::swap(perm[k], perm[best]);
        }

        double norm = std::sqrt(best_norm);
        if (k == 0) max_diag = norm;
        if (norm <= max_diag * 1e-13) {
            rank = k;
            break;
        }
        if (col(k)[k] < 0.0) norm = -norm;
        for (int i = k; i < m; ++i) col(k)[i] /= norm;
        col(k)[k] += 1.0;
        beta[k] = norm;  // R(k,k) = -norm after the reflection

        for (int j = k + 1; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += col(k)[i] * col(j)[i];
            s /= col(k)[k];
            for (int i = k; i < m; ++i) col(j)[i] -= s * col(k)[i];
        }
        double s = 0.0;
        for (int i = k; i < m; ++i) s += col(k)[i] * rhs[i];
        s /= col(k)[k];
        for (int i = k; i < m; ++i) rhs[i] -= s * col(k)[i];
    }

    std::vector<double> y(n, 0.0);
    for (int k = rank - 1; k >= 0; --k) {
        double s = rhs[k];
        for (int j = k + 1; j < rank; ++j) s -= col(j)[k] * y[perm[j]];
        y[perm[k]] = s / (-beta[k]);
    }
    return y;
}

// Minimizes ||M_S alpha_S - target|| subject to sum(alpha_S) = 1, where S is
// the support index list. Negative entries trigger removal of the most
// negative index and a re-solve (at most |S| rounds). Returns the full-size
// vector, or an empty vector when no usable support remains.
std::vector<double> polish_on_support(const SimplexLSProblem& p, std::vector<int> support) {
    while (!support.empty()) {
        const int s = static_cast<int>(support.size());
        std::vector<double> alpha(p.cols, 0.0);
        if (s == 1) {
            alpha[support[0]] = 1.0;
            return alpha;
        }
        // Null-space parameterization: alpha_S = e_1 + sum_i y_i (e_{i+1} - e_1).
        const int m = p.rows;
        std::vector<double> a(std::size_t(m) * (s - 1));
        std::vector<double> rhs(m);
        for (int i = 0; i < m; ++i) {
            const double base = p.at(i, support[0]);
            rhs[i] = p.target[i] - base;
            for (int j = 1; j < s; ++j) {
                a[std::size_t(j - 1) * m + i] = p.at(i, support[j]) - base;
            }
        }
        const auto y = qr_least_squares(m, s - 1, std::move(a), std::move(rhs));
        double head = 1.0;
        for (int j = 1; j < s; ++j) {
            alpha[support[j]] = y[j - 1];
            head -= y[j - 1];
        }
        alpha[support[0]] = head;

        int worst = -1;
        double worst_value = -1e-10;
        for (int j = 0; j < s; ++j) {
            if (alpha[support[j]] < worst_value) {
                worst_value = alpha[support[j]];
                worst = j;
            }
        }
        if (worst < 0) {
            for (int j = 0; j < s; ++j) {
                alpha[support[j]] = std::max(alpha[support[j]], 0.0);
            }
            return alpha;
        }
        support.erase(support.begin() + worst);
    }
    return {};
}

}  // namespace

SimplexLSSolution solve_simplex_ls(const SimplexLSProblem& problem,
                                   const SolveOptions& options) {
    problem.check();
    if (!(options.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const int q = problem.cols;

    std::vector<double> alpha;
    if (options.warm_start.empty()) {
        alpha.assign(q, 1.0 / q);
    } else {
        if (static_cast<int>(options.warm_start.size()) != q) {
            throw std::invalid_argument("warm start length does not match cols");
        }
        alpha = project_onto_simplex(options.warm_start);
    }

    const Factored fac = factorize(problem);
    const double lipschitz = lipschitz_estimate(fac);

    SimplexLSSolution solution;
    solution.alpha = alpha;
    solution.iterations = 0;

    if (lipschitz > 0.0) {
        const double step = 1.0 / lipschitz;
        std::vector<double> best = alpha;
        double best_f = fac.f(best);
        std::vector<double> prev = alpha;
        std::vector<double> y = alpha;
        double momentum = 1.0;
        int stall = 0;

        int k = 0;
        for (; k < options.max_iters; ++k) {
            auto grad_y = fac.grad(y);
            std::vector<double> next(q);
            for (int j = 0; j < q; ++j) next[j] = y[j] - step * grad_y[j];
            next = project_onto_simplex(std::move(next));

            const double f_next = fac.f(next);
            if (f_next > best_f) {
                // Momentum overshoot: restart from the best point seen.
                y = best;
                prev = best;
                momentum = 1.0;
                auto grad_b = fac.grad(y);
                for (int j = 0; j < q; ++j) next[j] = y[j] - step * grad_b[j];
                next = project_onto_simplex(std::move(next));
            }

            const double f_now = fac.f(next);
            if (f_now < best_f - 1e-16 * (1.0 + std::abs(best_f))) {
                best = next;
                best_f = f_now;
                stall = 0;
            } else {
                ++stall;
            }

            const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
            std::vector<double> y_next(q);
            const double mix = (momentum - 1.0) / momentum_next;
            for (int j = 0; j < q; ++j) y_next[j] = next[j] + mix * (next[j] - prev[j]);
            prev = next;
            y = std::move(y_next);
            momentum = momentum_next;

            const double kkt = kkt_residual_at(next, fac.grad(next));
            if (kkt <= options.tol) {
                best = next;
                best_f = fac.f(next);
                ++k;
                break;
            }
            if (stall >= 300) {
                ++k;
                break;  // no further progress at this precision
            }
        }
        solution.iterations = k;
        solution.alpha = best;
    }

    // Exact equality-constrained solve on the detected support; adopt it
    // unless it genuinely worsens the objective. Two numerical traps hide in
    // that comparison. First, near the optimum both objective values agree to
    // within an ulp, so f(polished) - f(current) is formed in residual terms:
    // with s = M (polished - current) it equals sum_i s_i (2 r_i + s_i),
    // which stays accurate however close the points are. Second, each
    // candidate satisfies the mass constraint only to rounding, and a
    // coordinate sum off by one ulp shifts the objective by roughly the
    // constraint multiplier times machine epsilon, an advantage that
    // disappears once the result is renormalized. Differences below that
    // scale are therefore ties, and ties go to the polished point.
    {
        std::vector<int> support;
        for (int j = 0; j < q; ++j) {
            if (solution.alpha[j] > 1e-9) support.push_back(j);
        }
        if (support.empty()) support.push_back(0);
        auto polished = polish_on_support(problem, std::move(support));
        if (!polished.empty()) {
            std::vector<double> delta(q);
            for (int j = 0; j < q; ++j) delta[j] = polished[j] - solution.alpha[j];
            std::vector<double> grad(q, 0.0);
            double diff = 0.0;
            double f_cur = 0.0;
            for (int i = 0; i < problem.rows; ++i) {
                double resid = -problem.target[i];
                double shift = 0.0;
                for (int j = 0; j < q; ++j) {
                    resid += problem.at(i, j) * solution.alpha[j];
                    shift += problem.at(i, j) * delta[j];
                }
                diff += shift * (2.0 * resid + shift);
                f_cur += resid * resid;
                for (int j = 0; j < q; ++j) grad[j] += 2.0 * problem.at(i, j) * resid;
            }
            double grad_scale = 0.0;
            for (double g : grad) grad_scale = std::max(grad_scale, std::abs(g));
            const double eps = std::numeric_limits<double>::epsilon();
            const double slack = 8.0 * eps * q * (1.0 + grad_scale + f_cur);
            if (diff <= slack) solution.alpha = polished;
        }
    }

    // Clamp tiny mass to exact zero and renormalize.
    double total = 0.0;
    for (double& v : solution.alpha) {
        if (v < 1e-12) v = 0.0;
        total += v;
    }
    if (total <= 0.0) {
        solution.alpha.assign(q, 1.0 / q);
    } else if (total != 1.0) {
        for (double& v : solution.alpha) v /= total;
    }

    solution.objective = objective_value(problem, solution.alpha);
    solution.kkt_residual = kkt_residual_at(solution.alpha, residual_gradient(problem, solution.alpha));
    solution.converged = solution.kkt_residual <= options.tol;
    return solution;
}

}  // namespace cyclid
