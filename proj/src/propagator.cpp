#include "ringsim/propagator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ringsim/errors.hpp"
#include "ringsim/model.hpp"

namespace ringsim {

namespace {

cplx cdot(std::span<const cplx> a, std::span<const cplx> b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}


// (exp(z) - 1) / z with the removable singularity at 0.
cplx phi1(cplx z) {
    if (std::abs(z) < 1e-5) return 1.0 + z / 2.0 + z * z / 6.0;
    return (std::exp(z) - 1.0) / z;
}

class Lanczos {
public:
    Lanczos(const SparseOperator& h, int m)
        : h_(h), m_(m), v_(static_cast<Eigen::Index>(h.dimension()), m + 1) {}

    // Builds the Krylov basis of psi; returns the number of vectors (may stop
    // early on an invariant subspace).
    int build(const Eigen::VectorXcd& psi, double beta0, PropagationStats& stats) {
        alpha_.assign(m_, 0.0);
        beta_.assign(m_, 0.0);
        v_.col(0) = psi / beta0;
        const double scale = std::max(1.0, h_.max_row_abs_sum());
        const auto n = static_cast<std::size_t>(v_.rows());
        for (int j = 0; j < m_; ++j) {
            h_.apply(std::span<const cplx>(v_.col(j).data(), n), std::span<cplx>(v_.col(j + 1).data(), n));
            ++stats.matvecs;
            auto w = v_.col(j + 1);
            alpha_[j] = v_.col(j).dot(w).real();
            // full Gram-Schmidt, repeated when cancellation was severe
            const double before = w.norm();
            w -= v_.leftCols(j + 1) * (v_.leftCols(j + 1).adjoint() * w);
            beta_[j] = w.norm();
            if (beta_[j] < 0.7 * before) {
                w -= v_.leftCols(j + 1) * (v_.leftCols(j + 1).adjoint() * w);
                beta_[j] = w.norm();
            }
            if (beta_[j] <= 1e-14 * scale) {
                beta_[j] = 0.0;
                return j + 1;
            }
            w /= beta_[j];
        }
        return m_;
    }

    double alpha(int j) const { return alpha_[j]; }
    double beta(int j) const { return beta_[j]; }
    const Eigen::MatrixXcd& basis() const { return v_; }

private:
    const SparseOperator& h_;
    int m_;
    Eigen::MatrixXcd v_;
    std::vector<double> alpha_;
    std::vector<double> beta_;
};

}  // namespace

PropagationStats propagate(const SparseOperator& h, std::span<const cplx> psi0,
                           std::span<const double> times, const StateObserver& observe,
                           const PropagatorOptions& options) {
    if (psi0.size() != h.dimension()) throw InvalidArgument("state does not match the operator");
    if (options.krylov_dim < 2) throw InvalidArgument("Krylov dimension must be >= 2");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
            throw InvalidArgument("sample times must be non-negative and non-decreasing");
        }
    }
    PropagationStats stats;
    Eigen::VectorXcd psi = Eigen::Map<const Eigen::VectorXcd>(psi0.data(), static_cast<Eigen::Index>(psi0.size()));
    const int m_max = std::min<int>(options.krylov_dim, static_cast<int>(h.dimension()));
    Lanczos lanczos(h, m_max);
    double t = 0.0;
    double tau = std::min(1.0, 0.5 * m_max / std::max(1e-300, h.max_row_abs_sum()));

    for (std::size_t s = 0; s < times.size(); ++s) {
        while (t < times[s]) {
            const double beta0 = psi.norm();
            if (beta0 == 0.0) {
                t = times[s];
                break;
            }
            const int m = lanczos.build(psi, beta0, stats);
            Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
            for (int j = 0; j < m; ++j) {
                tri(j, j) = lanczos.alpha(j);
                if (j + 1 < m) tri(j, j + 1) = tri(j + 1, j) = lanczos.beta(j);
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
            const auto& lam = es.eigenvalues();
            const auto& q = es.eigenvectors();
            const double beta_m = lanczos.beta(m - 1);

            // shrink the substep until the a posteriori error estimate is
            // acceptable; tau is the controller's free step, h the one taken
            double h = 0.0;
            double err = 0.0;
            for (;;) {
                h = std::min(tau, times[s] - t);
                cplx tail = 0.0;
                for (int j = 0; j < m; ++j) tail += q(m - 1, j) * phi1(cplx(0.0, -h * lam[j])) * q(0, j);
                err = beta0 * beta_m * h * std::abs(tail);
                if (err <= options.tol || beta_m == 0.0) break;
                ++stats.rejected;
                tau = h * std::clamp(0.9 * std::pow(options.tol / err, 1.0 / m), 0.1, 0.5);
                if (tau < options.min_step) {
                    throw ConvergenceError("Krylov propagation step fell below the minimum", err);
                }
            }
            Eigen::VectorXcd phase(m);
            for (int j = 0; j < m; ++j) phase[j] = std::exp(cplx(0.0, -h * lam[j])) * q(0, j);
            const Eigen::VectorXcd coef = beta0 * (q.cast<cplx>() * phase);
            psi = lanczos.basis().leftCols(m) * coef;
            t += h;
            ++stats.substeps;
            stats.max_local_error = std::max(stats.max_local_error, err);
            if (h == tau) {
                // error scales roughly like tau^m
                const double grow = err > 0.0 ? 0.9 * std::pow(options.tol / err, 1.0 / m) : 2.0;
                tau *= std::clamp(grow, 0.5, 2.0);
            }
        }
        observe(s, times[s], std::span<const cplx>(psi.data(), psi.size()));
    }
    return stats;
}

QuenchResult quench(const FockBasis& basis, const SparseOperator& h, std::span<const double> psi0,
                    std::span<const double> times, int observed_K, const PropagatorOptions& options) {
    if (psi0.size() != basis.size()) throw InvalidArgument("state does not match the basis");
    QuenchResult r{{times.begin(), times.end()}, observed_K, {}, {}, {}, {}};
    std::vector<cplx> start(psi0.begin(), psi0.end());
    std::vector<cplx> hpsi(basis.size());
    r.stats = propagate(
        h, start, times,
        [&](std::size_t, double, std::span<const cplx> psi) {
            double pk = 0.0;
            double n2 = 0.0;
            for (std::size_t i = 0; i < psi.size(); ++i) {
                const double w = std::norm(psi[i]);
                n2 += w;
                if (basis.total_K(i) == observed_K) pk += w;
            }
            h.apply(psi, hpsi);
            r.p_K.push_back(pk);
            r.norm.push_back(n2);
            r.energy.push_back(std::real(cdot(psi, hpsi)) / n2);
        },
        options);
    return r;
}

std::vector<double> uniform_times(double dt, std::size_t count) {
    if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i) t[i] = dt * static_cast<double>(i);
    return t;
}

double dominant_angular_frequency(std::span<const double> trace, double dt) {
    const std::size_t n = trace.size();
    if (n < 4) throw InvalidArgument("trace too short for a frequency estimate");
    if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
    double mean = 0.0;
    for (double x : trace) mean += x;
    mean /= static_cast<double>(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1));
        y[i] = (trace[i] - mean) * w;
    }
    // Goertzel recurrence for |sum_i y_i exp(-i omega dt i)|^2
    auto power = [&](double omega) {
        const double c = 2.0 * std::cos(omega * dt);
        double s1 = 0.0;
        double s2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s0 = y[i] + c * s1 - s2;
            s2 = s1;
            s1 = s0;
        }
        return s1 * s1 + s2 * s2 - c * s1 * s2;
    };
    // scan with 4x zero-padding resolution up to Nyquist
    const double nyquist = kPi / dt;
    const double span = static_cast<double>(n) * dt;
    const double step = 2.0 * kPi / (4.0 * span);
    double best = 0.0;
    double best_p = 0.0;
    for (double w = step; w < nyquist; w += step) {
        const double p = power(w);
        if (p > best_p) {
            best_p = p;
            best = w;
        }
    }
    if (best_p == 0.0) return 0.0;
    double lo = std::max(step * 0.5, best - step);
    double hi = std::min(nyquist, best + step);
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    double pa = power(a);
    double pb = power(b);
    for (int it = 0; it < 80 && hi - lo > 1e-12 * best; ++it) {
        if (pa > pb) {
            hi = b;
            b = a;
            pb = pa;
            a = hi - ratio * (hi - lo);
            pa = power(a);
        } else {
            lo = a;
            a = b;
            pa = pb;
            b = lo + ratio * (hi - lo);
            pb = power(b);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace ringsim
