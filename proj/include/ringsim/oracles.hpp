#pragma once

#include <vector>

#include "ringsim/observables.hpp"

namespace ringsim {

/// Exact ground energy of two atoms on the ring at b = 0, Omega = 0 (K = 0),
/// from the closure relation 1 = g sum_q 1/(E - 2 q^2) summed in closed form:
/// g pi cot(pi z) = 2 z with E = 2 z^2, z in (0, 1/2). Requires g > 0;
/// g = +inf gives 1/2.
double two_particle_exact(double g);

struct TruncationReport {
    double interaction;
    int n_modes;
    double exact;
    double rescaled;   // ED with g_tilde, leading-order g0 = r/2
    double unscaled;   // ED with bare g
    double rescaled_error;  // relative
    double unscaled_error;  // relative
};

/// Two-atom ED at b = 0 in an r-mode window against two_particle_exact.
TruncationReport truncation_validation(double g, int n_modes);

struct BetheSolution {
    int n_atoms;
    double interaction;
    std::vector<double> quasi_momenta;  // units 2 pi / L, ascending
    double energy;                      // sum of squares, units E0
    double residual;                    // max |F_j| at exit
    int iterations;
};

/// Lieb-Liniger ground state with periodic boundary conditions:
///   kappa_j = I_j - (1/pi) sum_l atan((kappa_j - kappa_l) / (pi g)),
/// I_j = -(N-1)/2, ..., (N-1)/2. Requires 2 <= N <= 9 and g > 0.
/// Throws ConvergenceError if the residual does not fall below 1e-12.
BetheSolution bethe_ground_energy(int n_atoms, double g);

/// Binomial distribution C(N, K) / 2^N, K = 0..N.
AngularMomentumDistribution binomial_PK(int n_atoms);

}  // namespace ringsim
