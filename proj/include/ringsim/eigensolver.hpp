#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ringsim/sparse_operator.hpp"

namespace ringsim {

inline constexpr std::uint64_t kDefaultSeed = 20100101;

struct SolverOptions {
    double tol = 1e-9;               // on ||H v - lambda v||
    int max_matvecs = 50000;
    std::uint64_t seed = kDefaultSeed;
    std::size_t dense_threshold = 2000;
    bool force_iterative = false;
    int max_basis = 0;               // 0: chosen from the number of wanted pairs
    std::vector<std::vector<double>> initial_vectors;  // warm start
};

struct EigenSolution {
    std::vector<double> eigenvalues;                // ascending
    std::vector<std::vector<double>> eigenvectors;  // unit norm
    std::vector<double> residuals;
    int iterations = 0;        // matrix-vector products
    bool degenerate = false;   // lambda_1 - lambda_0 < 10 tol
    bool dense = false;

    double gap() const { return eigenvalues.size() > 1 ? eigenvalues[1] - eigenvalues[0] : 0.0; }
    double max_residual() const;
};

/// Lowest m eigenpairs of a real symmetric operator.
///
/// Dimensions up to `dense_threshold` are diagonalized densely unless
/// `force_iterative` is set. Larger problems use a block Krylov method with
/// full reorthogonalization and thick restarts: the basis is expanded by the
/// residuals of the wanted Ritz pairs, which spans the same block Krylov space
/// as block Lanczos and keeps exact degeneracies resolvable. The start block is
/// pseudo-random with a fixed seed so iteration counts are reproducible.
///
/// Throws ConvergenceError when max_matvecs is exhausted.
EigenSolution lowest_eigenpairs(const SparseOperator& h, int m, const SolverOptions& options = {});

/// Full dense diagonalization (independent reference path).
EigenSolution dense_eigenpairs(const SparseOperator& h, int m);

/// Euclidean helpers shared by the solver, the propagator and observables.
double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

}  // namespace ringsim
