#pragma once

#include <string>
#include <vector>

#include "ringsim/fock_basis.hpp"
#include "ringsim/model.hpp"
#include "ringsim/sparse_operator.hpp"

namespace ringsim {

/// Parameter-independent pieces of the truncated Hamiltonian for one basis:
///   H = sum_k (k - Omega/2pi)^2 n_k + b * barrier + g_tilde * interaction
/// with barrier = sum_{k1,k2} a+_{k1} a_{k2} and
/// interaction = 1/2 sum a+_{k1} a+_{k2} a_{k1-q} a_{k2+q}, restricted to terms
/// whose four momenta all lie in the window.
struct HamiltonianTerms {
    SparseOperator barrier;
    SparseOperator interaction;
};

HamiltonianTerms build_terms(const FockBasis& basis);

/// Kinetic diagonal sum_k (k - phase/2pi)^2 n_k for every basis state.
std::vector<double> kinetic_diagonal(const FockBasis& basis, double phase);

/// b * barrier + g_tilde * interaction + kinetic(phase).
SparseOperator assemble(const FockBasis& basis, const HamiltonianTerms& terms, double barrier,
                        double g_tilde, double phase);

/// Throws InvalidArgument when basis and params disagree on N or r, or the
/// coupling was rescaled for a different window.
SparseOperator build_hamiltonian(const FockBasis& basis, const SystemParams& params,
                                 const RescaledCoupling& coupling);

/// Annihilation operator a_k as a dim(N-1) x dim(N) matrix.
SparseOperator loss_operator(int momentum, const FockBasis& basis_n, const FockBasis& basis_nm1);

/// Header line block for matrix dumps: N, r, g, g_tilde, b, Omega.
std::string matrix_header(const SystemParams& params, const RescaledCoupling& coupling);

}  // namespace ringsim
