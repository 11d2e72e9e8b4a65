#pragma once

#include <vector>

namespace ringsim {

/// One atom on the ring with a delta barrier of strength b (units E0 L) and
/// rotational phase Omega. Levels are eps_mu = alpha_mu^2 (units E0) where the
/// alpha_mu solve
///     2 alpha / (pi b) = cot(pi alpha - Omega/2) + cot(pi alpha + Omega/2).
struct SingleParticleLevels {
    double barrier;
    double phase;
    std::vector<double> alpha;   // ascending
    std::vector<double> energy;  // alpha^2
};

/// Lowest `count` levels. Requires b >= 0 and 0 < Omega < 2 pi. Each root is
/// bracketed between consecutive poles of the right-hand side; at b = 0 the
/// plane-wave values |k - Omega/2pi| are returned.
SingleParticleLevels levels(double barrier, double phase, int count);

struct TonksOptions {
    /// Allow even N with naive level filling. The ring boundary condition for
    /// even N is not treated; callers should warn when they enable this.
    bool allow_even_n = false;
};

/// Tonks-Girardeau gap eps_N - eps_{N-1} at Omega = pi.
double tg_gap(int n_atoms, double barrier, const TonksOptions& options = {});

/// Sum of the lowest N single-particle levels at Omega = pi.
double tg_ground_energy(int n_atoms, double barrier);

}  // namespace ringsim
