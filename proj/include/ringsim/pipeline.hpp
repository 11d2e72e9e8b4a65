#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ringsim/eigensolver.hpp"
#include "ringsim/fock_basis.hpp"
#include "ringsim/hamiltonian.hpp"
#include "ringsim/model.hpp"

namespace ringsim {

/// Basis and parameter-independent Hamiltonian terms for one (N, r), built
/// once and shared by every parameter point on that window.
class RingModel {
public:
    RingModel(int n_atoms, int n_modes, std::uint64_t dimension_cap = kDefaultDimensionCap);

    const FockBasis& basis() const noexcept { return basis_; }
    const HamiltonianTerms& terms() const noexcept { return terms_; }
    int n_atoms() const noexcept { return basis_.n_atoms(); }
    int n_modes() const noexcept { return basis_.n_modes(); }

    /// Throws InvalidArgument when params are for a different (N, r).
    SparseOperator hamiltonian(const SystemParams& params, const RescaledCoupling& coupling) const;

private:
    FockBasis basis_;
    HamiltonianTerms terms_;
};

struct PointSolution {
    SystemParams params;
    RescaledCoupling coupling;
    EigenSolution solution;
    double gap() const { return solution.gap(); }
};

/// Lowest `levels` eigenpairs at one parameter point.
PointSolution solve_point(const RingModel& model, const SystemParams& params,
                          CouplingOrder order = CouplingOrder::leading, int levels = 2,
                          const SolverOptions& options = {});

/// lambda_1 - lambda_0 for params, building the model on the fly.
double level_splitting(const SystemParams& params, CouplingOrder order = CouplingOrder::leading,
                       const SolverOptions& options = {});

}  // namespace ringsim
