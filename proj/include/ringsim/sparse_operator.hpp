#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ringsim {

struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    double value;
};

/// Real sparse matrix in compressed-row form. Columns are sorted within each
/// row. Symmetric operators store both triangles.
class SparseOperator {
public:
    SparseOperator() = default;
    SparseOperator(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                   std::vector<std::uint32_t> col_idx, std::vector<double> values, bool symmetric);

    /// Duplicates are summed in the order given; entries are then sorted by
    /// (row, col).
    static SparseOperator from_triplets(std::size_t rows, std::size_t cols,
                                        std::vector<Triplet> triplets, bool symmetric);

    /// Real diagonal matrix.
    static SparseOperator diagonal(std::span<const double> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t dimension() const noexcept { return rows_; }
    std::size_t nnz() const noexcept { return values_.size(); }
    bool is_symmetric() const noexcept { return symmetric_; }

    std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const std::uint32_t> col_idx() const noexcept { return col_idx_; }
    std::span<const double> values() const noexcept { return values_; }

    /// y = A x
    void apply(std::span<const double> x, std::span<double> y) const;
    void apply(std::span<const std::complex<double>> x, std::span<std::complex<double>> y) const;
    std::vector<double> apply(std::span<const double> x) const;

    /// Stored value at (i, j), zero when absent.
    double entry(std::size_t i, std::size_t j) const;

    std::vector<double> diagonal_entries() const;

    /// a * this + b * other; both must have the same shape.
    SparseOperator combined(double a, const SparseOperator& other, double b) const;
    SparseOperator plus_diagonal(std::span<const double> diag) const;

    /// Infinity norm max_i sum_j |A_ij|.
    double max_row_abs_sum() const;

    /// Coordinate text dump: '#'-prefixed header lines, then "row col value"
    /// with 0-based indices and 17 significant digits.
    void write_coordinate(std::ostream& os, const std::string& header) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::uint32_t> col_idx_;
    std::vector<double> values_;
    bool symmetric_ = false;
};

}  // namespace ringsim
