#pragma once

// Test-only reference implementations, deliberately independent of the
// second-quantized machinery under test.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ringsim/model.hpp"
#include "ringsim/sparse_operator.hpp"

namespace testing {

inline Eigen::MatrixXd to_dense(const ringsim::SparseOperator& h) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(h.rows(), h.cols());
    const auto rp = h.row_ptr();
    for (std::size_t i = 0; i < h.rows(); ++i) {
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) m(i, h.col_idx()[k]) = h.values()[k];
    }
    return m;
}

inline Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
    Eigen::MatrixXd s(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = 0; j < idx.size(); ++j) s(i, j) = m(idx[i], idx[j]);
    }
    return s;
}

/// Spectrum of N distinguishable particles in plane waves k in the window,
///   sum_i (k_i - w)^2 + b sum_i delta(x_i) + g sum_{i<j} delta(x_i - x_j),
/// projected onto the permutation-symmetric subspace.
inline Eigen::VectorXd first_quantized_spectrum(int n, int r, double g, double b, double omega) {
    const int k0 = -r / 2 + 1;
    const double w = omega / (2.0 * ringsim::kPi);
    int dim = 1;
    for (int i = 0; i < n; ++i) dim *= r;
    auto digits = [&](int idx) {
        std::vector<int> d(n);
        for (int p = n - 1; p >= 0; --p) {
            d[p] = idx % r;
            idx /= r;
        }
        return d;
    };
    auto index = [&](const std::vector<int>& d) {
        int idx = 0;
        for (int x : d) idx = idx * r + x;
        return idx;
    };
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const auto s = digits(i);
        for (int p = 0; p < n; ++p) h(i, i) += std::pow(s[p] + k0 - w, 2);
        for (int p = 0; p < n; ++p) {
            for (int a = 0; a < r; ++a) {
                auto t = s;
                t[p] = a;
                h(i, index(t)) += b;
            }
        }
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const int total = s[p] + s[q];  // in mode indices
                for (int a = 0; a < r; ++a) {
                    const int c = total - a;
                    if (c < 0 || c >= r) continue;
                    auto t = s;
                    t[p] = a;
                    t[q] = c;
                    h(i, index(t)) += g;
                }
            }
        }
    }
    // symmetrizer and its range
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    int count = 0;
    do {
        ++count;
        for (int i = 0; i < dim; ++i) {
            const auto s = digits(i);
            std::vector<int> t(n);
            for (int p = 0; p < n; ++p) t[p] = s[perm[p]];
            sym(index(t), i) += 1.0;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    sym /= count;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    std::vector<int> keep;
    for (int i = 0; i < dim; ++i) {
        if (es.eigenvalues()[i] > 0.5) keep.push_back(i);
    }
    Eigen::MatrixXd basis(dim, keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) basis.col(j) = es.eigenvectors().col(keep[j]);
    const Eigen::MatrixXd reduced = basis.transpose() * h * basis;
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(reduced, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace testing
