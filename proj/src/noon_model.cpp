#include "ringsim/noon_model.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "ringsim/errors.hpp"

namespace ringsim {

ChainModel make_chain(int n_atoms, double g, double b) {
    if (n_atoms < 1) throw InvalidArgument("chain requires N >= 1");
    if (!(g >= 0.0) || !(b >= 0.0) || !std::isfinite(g) || !std::isfinite(b)) {
        throw InvalidArgument("chain requires finite g, b >= 0");
    }
    ChainModel c{n_atoms, g, b, {}, {}};
    for (int n = 0; n <= n_atoms; ++n) c.diagonal.push_back(g * n * (n_atoms - n));
    for (int n = 0; n < n_atoms; ++n) c.offdiagonal.push_back(b * std::sqrt(double(n_atoms - n) * (n + 1)));
    return c;
}

std::vector<double> chain_eigenvalues(int n_atoms, double g, double b, int count) {
    const auto c = make_chain(n_atoms, g, b);
    const Eigen::Map<const Eigen::VectorXd> d(c.diagonal.data(), n_atoms + 1);
    const Eigen::Map<const Eigen::VectorXd> e(c.offdiagonal.data(), n_atoms);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    const int m = std::min(count, n_atoms + 1);
    return {es.eigenvalues().data(), es.eigenvalues().data() + m};
}

double chain_gap_numeric(int n_atoms, double g, double b) {
    if (n_atoms >= 2 && !(g > 0.0)) throw InvalidArgument("chain gap requires g > 0 for N >= 2");
    const auto ev = chain_eigenvalues(n_atoms, g, b, 2);
    return ev[1] - ev[0];
}

double noon_gap_closed_form(int n_atoms, double g, double b) {
    if (n_atoms < 1) throw InvalidArgument("closed form requires N >= 1");
    if (n_atoms >= 2 && !(g > 0.0)) throw InvalidArgument("closed form requires g > 0");
    // accumulate b^N / (g^(N-1) (N-1)!) factor by factor to avoid overflow
    double v = 2.0 * n_atoms * b;
    for (int n = 1; n < n_atoms; ++n) v *= b / (g * n);
    return v;
}

ChainReduction chain_elimination(int n_atoms, double g, double b, double lambda) {
    const auto c = make_chain(n_atoms, g, b);
    for (int n = 1; n < n_atoms; ++n) {
        if (std::abs(lambda - c.diagonal[n]) < 1e-12) {
            throw InvalidArgument("lambda is at a pole of the reduced coupling");
        }
    }
    const auto& t = c.diagonal;
    const auto& v = c.offdiagonal;
    // Amplitudes from rows 0..N-1 with a_0 = 1 are a_n = P_n / W_n + A_n, where
    // P_n = prod_{j<n} (lambda - t_j) and W_n = prod_{j<n} V_{j,j+1}.
    double p_over_w_prev = 0.0;  // P_{n-1}/W_{n-1}
    double p_over_w = 1.0;       // P_n/W_n at n = 0
    double a_prev = 0.0;
    double a = 0.0;  // A_0 = A_1 = 0
    for (int n = 0; n < n_atoms; ++n) {
        const double next_pw = p_over_w * (lambda - t[n]) / v[n];
        double next_a = 0.0;
        if (n >= 1) {
            const double back = v[n - 1] / v[n];  // V_{n,n-1} / V_{n,n+1}
            next_a = a * (lambda - t[n]) / v[n] - back * p_over_w_prev - back * a_prev;
        }
        p_over_w_prev = p_over_w;
        p_over_w = next_pw;
        a_prev = a;
        a = next_a;
    }
    double coupling = 1.0;
    for (int n = 0; n < n_atoms; ++n) coupling *= v[n];
    for (int n = 1; n < n_atoms; ++n) coupling /= lambda - t[n];
    return {coupling, t[0] - a * coupling, a};
}

NoonValidity noon_validity(int n_atoms, double g, double b, double threshold) {
    if (n_atoms < 2) throw InvalidArgument("validity ratios require N >= 2");
    const double n = n_atoms;
    const double x = g * (n - 1.0) / (2.0 * b * std::sqrt(n));
    const double y = (2.0 + g * (2.0 * n - 3.0)) / (g * std::sqrt(n * (n - 1.0)));
    NoonValidity out;
    out.ratio_barrier = std::isinf(x) ? x : x + std::hypot(x, 1.0);
    out.ratio_interaction = std::isinf(y) ? y : y + std::hypot(y, 1.0);
    out.condition_met = out.ratio_barrier >= threshold && out.ratio_interaction >= threshold;
    return out;
}

}  // namespace ringsim
