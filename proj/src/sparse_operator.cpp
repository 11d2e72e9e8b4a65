#include "ringsim/sparse_operator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ringsim/errors.hpp"

namespace ringsim {

SparseOperator::SparseOperator(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                               std::vector<std::uint32_t> col_idx, std::vector<double> values,
                               bool symmetric)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(std::move(values)), symmetric_(symmetric) {
    if (row_ptr_.size() != rows_ + 1 || col_idx_.size() != values_.size() ||
        row_ptr_.back() != values_.size()) {
        throw InvalidArgument("inconsistent compressed-row arrays");
    }
    if (symmetric_ && rows_ != cols_) throw InvalidArgument("symmetric operator must be square");
}

SparseOperator SparseOperator::from_triplets(std::size_t rows, std::size_t cols,
                                             std::vector<Triplet> triplets, bool symmetric) {
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<std::size_t> row_ptr(rows + 1, 0);
    std::vector<std::uint32_t> cols_out;
    std::vector<double> vals;
    cols_out.reserve(triplets.size());
    vals.reserve(triplets.size());
    for (std::size_t i = 0; i < triplets.size();) {
        const auto& t = triplets[i];
        if (t.row >= rows || t.col >= cols) throw InvalidArgument("triplet index out of range");
        double v = 0.0;
        std::size_t j = i;
        for (; j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col; ++j) {
            v += triplets[j].value;
        }
        cols_out.push_back(t.col);
        vals.push_back(v);
        row_ptr[t.row + 1] += 1;
        i = j;
    }
    for (std::size_t r = 0; r < rows; ++r) row_ptr[r + 1] += row_ptr[r];
    return SparseOperator(rows, cols, std::move(row_ptr), std::move(cols_out), std::move(vals),
                          symmetric);
}

SparseOperator SparseOperator::diagonal(std::span<const double> diag) {
    const std::size_t n = diag.size();
    std::vector<std::size_t> row_ptr(n + 1);
    std::vector<std::uint32_t> cols(n);
    for (std::size_t i = 0; i < n; ++i) {
        row_ptr[i + 1] = i + 1;
        cols[i] = static_cast<std::uint32_t>(i);
    }
    return SparseOperator(n, n, std::move(row_ptr), std::move(cols),
                          std::vector<double>(diag.begin(), diag.end()), true);
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != cols_ || y.size() != rows_) throw InvalidArgument("apply: size mismatch");
    for (std::size_t i = 0; i < rows_; ++i) {
        double acc = 0.0;
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) acc += values_[p] * x[col_idx_[p]];
        y[i] = acc;
    }
}

void SparseOperator::apply(std::span<const std::complex<double>> x,
                           std::span<std::complex<double>> y) const {
    if (x.size() != cols_ || y.size() != rows_) throw InvalidArgument("apply: size mismatch");
    for (std::size_t i = 0; i < rows_; ++i) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            const auto& v = x[col_idx_[p]];
            re += values_[p] * v.real();
            im += values_[p] * v.imag();
        }
        y[i] = {re, im};
    }
}

std::vector<double> SparseOperator::apply(std::span<const double> x) const {
    std::vector<double> y(rows_);
    apply(x, y);
    return y;
}

double SparseOperator::entry(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw InvalidArgument("entry: index out of range");
    const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::vector<double> SparseOperator::diagonal_entries() const {
    std::vector<double> d(std::min(rows_, cols_));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = entry(i, i);
    return d;
}

SparseOperator SparseOperator::combined(double a, const SparseOperator& other, double b) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw InvalidArgument("combined: shape mismatch");
    std::vector<std::size_t> row_ptr(rows_ + 1, 0);
    std::vector<std::uint32_t> cols;
    std::vector<double> vals;
    cols.reserve(nnz() + other.nnz());
    vals.reserve(nnz() + other.nnz());
    for (std::size_t i = 0; i < rows_; ++i) {
        std::size_t p = row_ptr_[i];
        std::size_t q = other.row_ptr_[i];
        const std::size_t pe = row_ptr_[i + 1];
        const std::size_t qe = other.row_ptr_[i + 1];
        while (p < pe || q < qe) {
            std::uint32_t c;
            double v;
            if (q == qe || (p < pe && col_idx_[p] < other.col_idx_[q])) {
                c = col_idx_[p];
                v = a * values_[p];
                ++p;
            } else if (p == pe || other.col_idx_[q] < col_idx_[p]) {
                c = other.col_idx_[q];
                v = b * other.values_[q];
                ++q;
            } else {
                c = col_idx_[p];
                v = a * values_[p] + b * other.values_[q];
                ++p;
                ++q;
            }
            if (v != 0.0) {
                cols.push_back(c);
                vals.push_back(v);
            }
        }
        row_ptr[i + 1] = vals.size();
    }
    return SparseOperator(rows_, cols_, std::move(row_ptr), std::move(cols), std::move(vals),
                          symmetric_ && other.symmetric_);
}

SparseOperator SparseOperator::plus_diagonal(std::span<const double> diag) const {
    if (diag.size() != rows_ || rows_ != cols_) throw InvalidArgument("plus_diagonal: shape mismatch");
    return combined(1.0, diagonal(diag), 1.0);
}

double SparseOperator::max_row_abs_sum() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += std::abs(values_[p]);
        best = std::max(best, s);
    }
    return best;
}

void SparseOperator::write_coordinate(std::ostream& os, const std::string& header) const {
    std::istringstream lines(header);
    for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';
    os << "# rows " << rows_ << " cols " << cols_ << " nnz " << nnz() << '\n';
    os << std::setprecision(17);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            os << i << ' ' << col_idx_[p] << ' ' << values_[p] << '\n';
        }
    }
}

}  // namespace ringsim
