#include "ringsim/oracles.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "ringsim/eigensolver.hpp"
#include "ringsim/errors.hpp"
#include "ringsim/fock_basis.hpp"
#include "ringsim/hamiltonian.hpp"
#include "ringsim/model.hpp"
#include "ringsim/roots.hpp"

namespace ringsim {

double two_particle_exact(double g) {
    if (!(g > 0.0)) throw InvalidArgument("two_particle_exact requires g > 0");
    if (std::isinf(g)) return 0.5;
    // f(z) = g pi cos(pi z) - 2 z sin(pi z): f(0) = g pi > 0, f(1/2) = -1.
    auto fdf = [g](double z, double& f, double& df) {
        const double c = std::cos(kPi * z);
        const double s = std::sin(kPi * z);
        f = g * kPi * c - 2.0 * z * s;
        df = -g * kPi * kPi * s - 2.0 * s - 2.0 * kPi * z * c;
    };
    const double z = detail::bracketed_newton(fdf, 0.0, 0.5);
    return 2.0 * z * z;
}

TruncationReport truncation_validation(double g, int n_modes) {
    const SystemParams params(2, n_modes, g, 0.0, 0.0);
    const FockBasis basis(2, n_modes);
    auto ground = [&](const RescaledCoupling& c) {
        const auto h = build_hamiltonian(basis, params, c);
        return lowest_eigenpairs(h, 1).eigenvalues[0];
    };
    TruncationReport r{g, n_modes, two_particle_exact(g), 0.0, 0.0, 0.0, 0.0};
    r.rescaled = ground(rescale_interaction(g, n_modes));
    r.unscaled = ground(unscaled_interaction(g));
    r.rescaled_error = std::abs(r.rescaled - r.exact) / r.exact;
    r.unscaled_error = std::abs(r.unscaled - r.exact) / r.exact;
    return r;
}

BetheSolution bethe_ground_energy(int n_atoms, double g) {
    if (n_atoms < 2 || n_atoms > 9) throw InvalidArgument("Bethe oracle supports 2 <= N <= 9");
    if (!(g > 0.0)) throw InvalidArgument("Bethe oracle requires g > 0");
    const int n = n_atoms;
    const double inv_c = std::isinf(g) ? 0.0 : 1.0 / (kPi * g);  // 1/(pi g)
    const double gamma = lieb_liniger_gamma(n, g);
    const double seed = std::isinf(g) ? 1.0 : gamma / (gamma + 2.0);

    Eigen::VectorXd quantum(n);
    for (int j = 0; j < n; ++j) quantum[j] = j - 0.5 * (n - 1);
    Eigen::VectorXd kappa = seed * quantum;

    auto residual = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd f = x - quantum;
        for (int j = 0; j < n; ++j) {
            for (int l = 0; l < n; ++l) {
                if (l != j) f[j] += std::atan((x[j] - x[l]) * inv_c) / kPi;
            }
        }
        return f;
    };

    Eigen::VectorXd f = residual(kappa);
    int it = 0;
    for (; it < 200 && f.lpNorm<Eigen::Infinity>() > 1e-14; ++it) {
        Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(n, n);
        for (int j = 0; j < n; ++j) {
            for (int l = 0; l < n; ++l) {
                if (l == j) continue;
                const double u = (kappa[j] - kappa[l]) * inv_c;
                const double d = inv_c / (kPi * (1.0 + u * u));
                jac(j, j) += d;
                jac(j, l) -= d;
            }
        }
        const Eigen::VectorXd step = jac.partialPivLu().solve(f);
        // damped step: halve until the residual decreases
        double t = 1.0;
        Eigen::VectorXd trial = kappa - step;
        Eigen::VectorXd ft = residual(trial);
        while (ft.norm() >= f.norm() && t > 1e-6) {
            t *= 0.5;
            trial = kappa - t * step;
            ft = residual(trial);
        }
        if (ft.norm() >= f.norm()) break;
        kappa = trial;
        f = ft;
    }
    const double res = f.lpNorm<Eigen::Infinity>();
    if (!(res < 1e-12)) throw ConvergenceError("Bethe equations did not converge", res);

    BetheSolution out{n, g, {}, 0.0, res, it};
    for (int j = 0; j < n; ++j) {
        out.quasi_momenta.push_back(kappa[j]);
        out.energy += kappa[j] * kappa[j];
    }
    return out;
}

AngularMomentumDistribution binomial_PK(int n_atoms) {
    if (n_atoms < 1) throw InvalidArgument("binomial_PK requires N >= 1");
    std::vector<double> p(static_cast<std::size_t>(n_atoms) + 1);
    double c = std::ldexp(1.0, -n_atoms);
    for (int k = 0; k <= n_atoms; ++k) {
        p[k] = c;
        c = c * (n_atoms - k) / (k + 1);
    }
    return AngularMomentumDistribution(0, std::move(p));
}

}  // namespace ringsim
