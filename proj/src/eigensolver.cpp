#include "ringsim/eigensolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "ringsim/errors.hpp"

namespace ringsim {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void finalize(const SparseOperator& h, EigenSolution& sol, double tol) {
    sol.residuals.clear();
    std::vector<double> hv(h.rows());
    for (auto& v : sol.eigenvectors) {
        const double nv = norm(v);
        for (double& x : v) x /= nv;
    }
    for (std::size_t i = 0; i < sol.eigenvectors.size(); ++i) {
        const auto& v = sol.eigenvectors[i];
        h.apply(v, hv);
        const double lambda = dot(v, hv);
        sol.eigenvalues[i] = lambda;
        double r2 = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const double d = hv[k] - lambda * v[k];
            r2 += d * d;
        }
        sol.residuals.push_back(std::sqrt(r2));
    }
    sol.degenerate = sol.eigenvalues.size() > 1 && sol.gap() < 10.0 * tol;
}

// Orthogonalize x against the first `cols` columns of v (two classical
// Gram-Schmidt passes). Returns the norm after projection.
double project_out(const MatrixXd& v, Index cols, Eigen::Ref<VectorXd> x) {
    for (int pass = 0; pass < 2; ++pass) {
        if (cols == 0) break;
        const VectorXd c = v.leftCols(cols).transpose() * x;
        x.noalias() -= v.leftCols(cols) * c;
    }
    return x.norm();
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double EigenSolution::max_residual() const {
    double r = 0.0;
    for (double x : residuals) r = std::max(r, x);
    return r;
}

EigenSolution dense_eigenpairs(const SparseOperator& h, int m) {
    const auto n = static_cast<Index>(h.rows());
    if (h.rows() != h.cols()) throw InvalidArgument("eigensolver needs a square operator");
    if (m < 1 || m > n) throw InvalidArgument("requested eigenpair count out of range");
    MatrixXd a = MatrixXd::Zero(n, n);
    const auto rp = h.row_ptr();
    const auto ci = h.col_idx();
    const auto vals = h.values();
    for (Index i = 0; i < n; ++i) {
        for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) a(i, ci[p]) = vals[p];
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0.0);
    EigenSolution sol;
    sol.dense = true;
    for (int i = 0; i < m; ++i) {
        sol.eigenvalues.push_back(es.eigenvalues()(i));
        const VectorXd col = es.eigenvectors().col(i);
        sol.eigenvectors.emplace_back(col.data(), col.data() + n);
    }
    finalize(h, sol, 0.0);
    // dense eigenvalues are more accurate than a Rayleigh quotient re-evaluation
    for (int i = 0; i < m; ++i) sol.eigenvalues[i] = es.eigenvalues()(i);
    return sol;
}

EigenSolution lowest_eigenpairs(const SparseOperator& h, int m, const SolverOptions& opt) {
    if (h.rows() != h.cols()) throw InvalidArgument("eigensolver needs a square operator");
    const auto n = static_cast<Index>(h.rows());
    if (m < 1 || m > n) throw InvalidArgument("requested eigenpair count out of range");
    if (!(opt.tol > 0.0)) throw InvalidArgument("tolerance must be positive");

    if (!opt.force_iterative && h.rows() <= opt.dense_threshold) {
        auto sol = dense_eigenpairs(h, m);
        sol.degenerate = m > 1 && sol.gap() < 10.0 * opt.tol;
        return sol;
    }

    const Index block = m;
    Index max_basis = opt.max_basis > 0 ? opt.max_basis : std::max<Index>(48, 8 * block + 16);
    max_basis = std::min(max_basis, n);
    const Index keep = std::max<Index>(std::min<Index>(max_basis / 2, n), 2 * block);

    MatrixXd v(n, max_basis);
    MatrixXd w(n, max_basis);
    MatrixXd t = MatrixXd::Zero(max_basis, max_basis);
    Index j = 0;
    int matvecs = 0;

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    VectorXd x(n);

    auto append = [&](Eigen::Ref<VectorXd> cand) -> bool {
        const double before = cand.norm();
        if (before == 0.0) return false;
        const double after = project_out(v, j, cand);
        if (after <= 1e-10 * before || after == 0.0) return false;
        v.col(j) = cand / after;
        h.apply(std::span<const double>(v.col(j).data(), static_cast<std::size_t>(n)),
                std::span<double>(w.col(j).data(), static_cast<std::size_t>(n)));
        ++matvecs;
        const VectorXd c = v.leftCols(j + 1).transpose() * w.col(j);
        for (Index i = 0; i <= j; ++i) {
            t(i, j) = c(i);
            t(j, i) = c(i);
        }
        ++j;
        return true;
    };
    auto append_random = [&]() {
        for (int attempt = 0; attempt < 8; ++attempt) {
            for (Index i = 0; i < n; ++i) x(i) = uni(rng);
            if (append(x)) return true;
        }
        return false;
    };

    for (const auto& guess : opt.initial_vectors) {
        if (static_cast<Index>(guess.size()) != n || j >= block) continue;
        x = Eigen::Map<const VectorXd>(guess.data(), n);
        append(x);
    }
    while (j < block) {
        if (!append_random()) break;
    }

    VectorXd theta;
    MatrixXd s;
    std::vector<double> res(static_cast<std::size_t>(block), 0.0);
    MatrixXd resid(n, block);
    for (;;) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(t.topLeftCorner(j, j));
        theta = es.eigenvalues();
        s = es.eigenvectors();
        const Index wanted = std::min<Index>(block, j);

        const MatrixXd y = v.leftCols(j) * s.leftCols(wanted);
        resid.leftCols(wanted) = w.leftCols(j) * s.leftCols(wanted) - y * theta.head(wanted).asDiagonal();
        bool converged = wanted == block;
        double worst = 0.0;
        for (Index i = 0; i < wanted; ++i) {
            res[i] = resid.col(i).norm();
            worst = std::max(worst, res[i]);
            if (res[i] > opt.tol) converged = false;
        }
        if (converged || j == n) break;
        if (matvecs >= opt.max_matvecs) {
            throw ConvergenceError("eigensolver did not converge within " +
                                       std::to_string(opt.max_matvecs) + " matrix-vector products",
                                   worst);
        }

        Index unconverged = 0;
        for (Index i = 0; i < wanted; ++i) unconverged += res[i] > opt.tol ? 1 : 0;
        if (j + std::max<Index>(unconverged, 1) > max_basis) {
            // thick restart onto the lowest Ritz vectors
            const Index kk = std::min(keep, j);
            v.leftCols(kk) = (v.leftCols(j) * s.leftCols(kk)).eval();
            w.leftCols(kk) = (w.leftCols(j) * s.leftCols(kk)).eval();
            t.setZero();
            for (Index i = 0; i < kk; ++i) t(i, i) = theta(i);
            j = kk;
            // reorthonormalize against drift accumulated by the rotations
            const double drift = (v.leftCols(j).transpose() * v.leftCols(j) -
                                  MatrixXd::Identity(j, j)).cwiseAbs().maxCoeff();
            if (drift > 1e-12) {
                Eigen::HouseholderQR<MatrixXd> qr(v.leftCols(j));
                v.leftCols(j) = qr.householderQ() * MatrixXd::Identity(n, j);
                for (Index i = 0; i < j; ++i) {
                    h.apply(std::span<const double>(v.col(i).data(), static_cast<std::size_t>(n)),
                            std::span<double>(w.col(i).data(), static_cast<std::size_t>(n)));
                    ++matvecs;
                }
                t.topLeftCorner(j, j) = v.leftCols(j).transpose() * w.leftCols(j);
                t.topLeftCorner(j, j) = (0.5 * (t.topLeftCorner(j, j) +
                                               t.topLeftCorner(j, j).transpose())).eval();
            }
            continue;
        }

        bool grew = false;
        for (Index i = 0; i < wanted && j < max_basis; ++i) {
            if (res[i] <= opt.tol) continue;
            x = resid.col(i);
            grew = append(x) || grew;
        }
        if (!grew && !append_random()) {
            throw ConvergenceError("eigensolver basis cannot be expanded", worst);
        }
    }

    EigenSolution sol;
    const Index wanted = std::min<Index>(block, j);
    if (wanted < m) throw ConvergenceError("invariant subspace smaller than requested", 0.0);
    const MatrixXd y = v.leftCols(j) * s.leftCols(wanted);
    for (Index i = 0; i < wanted; ++i) {
        sol.eigenvalues.push_back(theta(i));
        sol.eigenvectors.emplace_back(y.col(i).data(), y.col(i).data() + n);
    }
    sol.iterations = matvecs;
    finalize(h, sol, opt.tol);
    return sol;
}

}  // namespace ringsim
