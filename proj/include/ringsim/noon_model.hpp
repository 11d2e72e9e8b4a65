#pragma once

#include <vector>

namespace ringsim {

/// Two-mode reduction at Omega = pi: state n holds N - n atoms in k = 0 and
/// n atoms in k = 1. Constant energy offsets are dropped, so only gaps are
/// comparable with the full model.
struct ChainModel {
    int n_atoms;
    double interaction;
    double barrier;
    std::vector<double> diagonal;     // t_n = g n (N - n), n = 0..N
    std::vector<double> offdiagonal;  // V_{n,n+1} = b sqrt((N - n)(n + 1)), n = 0..N-1
};

ChainModel make_chain(int n_atoms, double g, double b);

/// lambda_1 - lambda_0 of the (N+1) x (N+1) tridiagonal matrix.
double chain_gap_numeric(int n_atoms, double g, double b);

/// Lowest `count` eigenvalues of the chain.
std::vector<double> chain_eigenvalues(int n_atoms, double g, double b, int count);

/// 2 N b^N / (g^(N-1) (N-1)!).
double noon_gap_closed_form(int n_atoms, double g, double b);

struct ChainReduction {
    double coupling;  // V(lambda)
    double energy;    // t(lambda) = t_0 - A_N V(lambda)
    double a_n;       // A_N
};

/// Eliminates the intermediate amplitudes of the chain at trial energy
/// lambda. Throws InvalidArgument when lambda is within 1e-12 of an
/// intermediate t_n (a pole of V).
ChainReduction chain_elimination(int n_atoms, double g, double b, double lambda);

struct NoonValidity {
    double ratio_barrier;      // |a0/a1|
    double ratio_interaction;  // |a0/a1'|
    bool condition_met;
};

/// Amplitude ratios of |N,0> to its strongest-coupled neighbours.
/// condition_met when both ratios reach `threshold`.
NoonValidity noon_validity(int n_atoms, double g, double b, double threshold = 10.0);

}  // namespace ringsim
