#pragma once

#include <vector>

namespace cyclid {

/// Least squares over the probability simplex:
/// minimize ||matrix * alpha - target||^2 subject to alpha in the simplex.
/// `matrix` is row-major rows x cols.
struct SimplexLSProblem {
    int rows = 0;
    int cols = 0;
    std::vector<double> matrix;
    std::vector<double> target;

    double at(int i, int j) const { return matrix[std::size_t(i) * cols + j]; }
    void check() const;
};

struct SimplexLSSolution {
    std::vector<double> alpha;
    double objective = 0.0;
    // ||alpha - proj(alpha - grad f(alpha))||_inf at the returned alpha.
    double kkt_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct SolveOptions {
    double tol = 1e-8;
    int max_iters = 50000;
    // Starting point; projected onto the simplex. Empty means uniform.
    std::vector<double> warm_start;
};

/// Euclidean projection onto the unit simplex (sort-and-threshold).
std::vector<double> project_onto_simplex(std::vector<double> v);

/// ||matrix * alpha - target||^2, computed from the residual.
double objective_value(const SimplexLSProblem& problem, const std::vector<double>& alpha);

/// Accelerated projected gradient (FISTA with restarts, step 1/L with L from
/// power iteration), followed by an exact least-squares polish on the active
/// support. Output entries below 1e-12 are clamped to zero and the vector
/// renormalized. If the KKT tolerance is not reached within max_iters the
/// best iterate is returned with converged = false.
SimplexLSSolution solve_simplex_ls(const SimplexLSProblem& problem,
                                   const SolveOptions& options = {});

}  // namespace cyclid
