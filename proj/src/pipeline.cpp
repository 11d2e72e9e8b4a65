#include "ringsim/pipeline.hpp"

#include "ringsim/errors.hpp"

namespace ringsim {

RingModel::RingModel(int n_atoms, int n_modes, std::uint64_t dimension_cap)
    : basis_(n_atoms, n_modes, dimension_cap), terms_(build_terms(basis_)) {}

SparseOperator RingModel::hamiltonian(const SystemParams& params,
                                      const RescaledCoupling& coupling) const {
    if (params.n_atoms() != n_atoms() || params.n_modes() != n_modes()) {
        throw InvalidArgument("parameters do not match the model window");
    }
    return assemble(basis_, terms_, params.barrier(), coupling.g_tilde, params.phase());
}

PointSolution solve_point(const RingModel& model, const SystemParams& params, CouplingOrder order,
                          int levels, const SolverOptions& options) {
    const auto coupling = coupling_for(params, order);
    const auto h = model.hamiltonian(params, coupling);
    return {params, coupling, lowest_eigenpairs(h, levels, options)};
}

double level_splitting(const SystemParams& params, CouplingOrder order, const SolverOptions& options) {
    const RingModel model(params.n_atoms(), params.n_modes());
    return solve_point(model, params, order, 2, options).gap();
}

}  // namespace ringsim
