#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "ringsim/fock_basis.hpp"
#include "ringsim/sparse_operator.hpp"

namespace ringsim {

using cplx = std::complex<double>;

struct PropagatorOptions {
    int krylov_dim = 20;
    double tol = 1e-12;       // local error per substep, absolute
    double min_step = 1e-9;   // substep below which propagation gives up
};

struct PropagationStats {
    int substeps = 0;
    int rejected = 0;
    int matvecs = 0;
    double max_local_error = 0.0;
};

/// Called once per requested sample time with the current state.
using StateObserver = std::function<void(std::size_t sample, double t, std::span<const cplx> psi)>;

/// Real-time evolution psi(t) = exp(-i H t) psi0 by short Lanczos iterates
/// with adaptive substeps. `times` must be non-decreasing and start at >= 0;
/// psi0 is taken at t = 0. The state is never renormalized, so the observed
/// norm measures the propagation error. Throws ConvergenceError when the
/// substep would fall below min_step.
PropagationStats propagate(const SparseOperator& h, std::span<const cplx> psi0,
                           std::span<const double> times, const StateObserver& observe,
                           const PropagatorOptions& options = {});

struct QuenchResult {
    std::vector<double> times;   // hbar/E0
    int observed_K;
    std::vector<double> p_K;     // P(K = observed_K)(t)
    std::vector<double> norm;    // ||psi(t)||^2
    std::vector<double> energy;  // <psi|H|psi> / ||psi||^2
    PropagationStats stats;
};

/// Evolves a real initial state under h and records P(K), norm and energy on
/// the sample grid.
QuenchResult quench(const FockBasis& basis, const SparseOperator& h, std::span<const double> psi0,
                    std::span<const double> times, int observed_K,
                    const PropagatorOptions& options = {});

/// Uniform grid 0, dt, ..., with `count` samples.
std::vector<double> uniform_times(double dt, std::size_t count);

/// Angular frequency of the strongest oscillation in a uniformly sampled
/// trace: mean removed, Hann window, dense periodogram scan, then
/// golden-section refinement of the peak. Returns 0 for a constant trace.
double dominant_angular_frequency(std::span<const double> trace, double dt);

}  // namespace ringsim
