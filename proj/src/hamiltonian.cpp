#include "ringsim/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <utility>

#include "ringsim/errors.hpp"

namespace ringsim {

namespace {

struct Entry {
    std::uint32_t col;
    double value;
};

// Builds a symmetric operator from upper-triangle rows; the lower triangle is
// the exact mirror so A(i,j) == A(j,i) bitwise.
class UpperBuilder {
public:
    explicit UpperBuilder(std::size_t n) : n_(n), row_ptr_(n + 1, 0) {}

    void add_row(std::size_t row, std::vector<Entry>& entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.col < b.col; });
        for (std::size_t p = 0; p < entries.size();) {
            double v = 0.0;
            std::size_t q = p;
            for (; q < entries.size() && entries[q].col == entries[p].col; ++q) v += entries[q].value;
            if (v != 0.0) {
                rows_.push_back(static_cast<std::uint32_t>(row));
                cols_.push_back(entries[p].col);
                vals_.push_back(v);
            }
            p = q;
        }
    }

    SparseOperator finish() {
        std::vector<std::size_t> count(n_, 0);
        for (std::size_t e = 0; e < vals_.size(); ++e) {
            count[rows_[e]] += 1;
            if (cols_[e] != rows_[e]) count[cols_[e]] += 1;
        }
        for (std::size_t i = 0; i < n_; ++i) row_ptr_[i + 1] = row_ptr_[i] + count[i];
        std::vector<std::uint32_t> col_idx(row_ptr_.back());
        std::vector<double> values(row_ptr_.back());
        std::vector<std::size_t> fill(row_ptr_.begin(), row_ptr_.end() - 1);
        // Upper entries are stored row-major with ascending columns, so mirrored
        // entries (row < col) arrive in ascending row order for their target
        // row and always precede the target row's own upper entries.
        for (std::size_t e = 0; e < vals_.size(); ++e) {
            const std::uint32_t r = rows_[e];
            const std::uint32_t c = cols_[e];
            if (c != r) {
                col_idx[fill[c]] = r;
                values[fill[c]++] = vals_[e];
            }
            col_idx[fill[r]] = c;
            values[fill[r]++] = vals_[e];
        }
        return SparseOperator(n_, n_, std::move(row_ptr_), std::move(col_idx), std::move(values), true);
    }

private:
    std::size_t n_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::uint32_t> rows_;
    std::vector<std::uint32_t> cols_;
    std::vector<double> vals_;
};

}  // namespace

HamiltonianTerms build_terms(const FockBasis& basis) {
    const std::size_t dim = basis.size();
    const int r = basis.n_modes();
    UpperBuilder barrier(dim);
    UpperBuilder interaction(dim);

    std::vector<std::uint8_t> occ(static_cast<std::size_t>(r));
    std::vector<Entry> b_row;
    std::vector<Entry> i_row;
    for (std::size_t i = 0; i < dim; ++i) {
        const auto src = basis.occupations(i);
        std::copy(src.begin(), src.end(), occ.begin());
        b_row.clear();
        i_row.clear();

        // one-body barrier: a+_{k1} a_{k2}; k1 == k2 sums to N on the diagonal
        b_row.push_back({static_cast<std::uint32_t>(i), static_cast<double>(basis.n_atoms())});
        for (int p = 0; p < r; ++p) {
            const int np = occ[p];
            if (np == 0) continue;
            occ[p] -= 1;
            for (int k = 0; k < r; ++k) {
                if (k == p) continue;
                const int nk = occ[k];
                occ[k] += 1;
                const std::size_t j = basis.rank(occ);
                occ[k] -= 1;
                if (j < i) continue;
                b_row.push_back({static_cast<std::uint32_t>(j),
                                 std::sqrt(static_cast<double>(np * (nk + 1)))});
            }
            occ[p] += 1;
        }
        barrier.add_row(i, b_row);

        // two-body: ordered annihilation pair (p1, p2), ordered creation pair
        // (k1, k2) with k1 + k2 = p1 + p2 (mode indices share the offset)
        for (int p2 = 0; p2 < r; ++p2) {
            const int n2 = occ[p2];
            if (n2 == 0) continue;
            occ[p2] -= 1;
            for (int p1 = 0; p1 < r; ++p1) {
                const int n1 = occ[p1];
                if (n1 == 0) continue;
                occ[p1] -= 1;
                const int total = p1 + p2;
                const int k1_lo = std::max(0, total - (r - 1));
                const int k1_hi = std::min(r - 1, total);
                for (int k1 = k1_lo; k1 <= k1_hi; ++k1) {
                    const int k2 = total - k1;
                    const int m2 = occ[k2];
                    occ[k2] += 1;
                    const int m1 = occ[k1];
                    occ[k1] += 1;
                    const std::size_t j = basis.rank(occ);
                    occ[k1] -= 1;
                    occ[k2] -= 1;
                    if (j < i) continue;
                    const auto prod = static_cast<std::int64_t>(n2) * n1 * (m2 + 1) * (m1 + 1);
                    i_row.push_back({static_cast<std::uint32_t>(j),
                                     0.5 * std::sqrt(static_cast<double>(prod))});
                }
                occ[p1] += 1;
            }
            occ[p2] += 1;
        }
        interaction.add_row(i, i_row);
    }
    return {barrier.finish(), interaction.finish()};
}

std::vector<double> kinetic_diagonal(const FockBasis& basis, double phase) {
    const double w = phase / (2.0 * kPi);
    std::vector<double> diag(basis.size());
    const int r = basis.n_modes();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto occ = basis.occupations(i);
        double e = 0.0;
        for (int j = 0; j < r; ++j) {
            if (occ[j] == 0) continue;
            const double d = basis.momentum_of_mode(j) - w;
            e += d * d * occ[j];
        }
        diag[i] = e;
    }
    return diag;
}

SparseOperator assemble(const FockBasis& basis, const HamiltonianTerms& terms, double barrier,
                        double g_tilde, double phase) {
    if (terms.barrier.rows() != basis.size() || terms.interaction.rows() != basis.size()) {
        throw InvalidArgument("Hamiltonian terms were built for a different basis");
    }
    const auto diag = kinetic_diagonal(basis, phase);
    return terms.barrier.combined(barrier, terms.interaction, g_tilde).plus_diagonal(diag);
}

SparseOperator build_hamiltonian(const FockBasis& basis, const SystemParams& params,
                                 const RescaledCoupling& coupling) {
    if (basis.n_atoms() != params.n_atoms() || basis.n_modes() != params.n_modes()) {
        throw InvalidArgument("basis does not match (N, r) of the parameters");
    }
    if (coupling.order == CouplingOrder::leading &&
        coupling.g_zero != static_cast<double>(params.n_modes()) / 2.0) {
        throw InvalidArgument("coupling was rescaled for a different number of modes");
    }
    const auto terms = build_terms(basis);
    return assemble(basis, terms, params.barrier(), coupling.g_tilde, params.phase());
}

SparseOperator loss_operator(int momentum, const FockBasis& basis_n, const FockBasis& basis_nm1) {
    if (basis_n.n_modes() != basis_nm1.n_modes()) throw InvalidArgument("bases must share r");
    if (basis_nm1.n_atoms() + 1 != basis_n.n_atoms()) {
        throw InvalidArgument("target basis must hold exactly one atom less");
    }
    if (momentum < basis_n.k_min() || momentum > basis_n.k_max()) {
        throw InvalidArgument("loss momentum outside the window");
    }
    const int mode = basis_n.mode_of_momentum(momentum);
    std::vector<Triplet> trip;
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(basis_n.n_modes()));
    for (std::size_t i = 0; i < basis_n.size(); ++i) {
        const auto src = basis_n.occupations(i);
        const int n = src[mode];
        if (n == 0) continue;
        std::copy(src.begin(), src.end(), occ.begin());
        occ[mode] -= 1;
        trip.push_back({static_cast<std::uint32_t>(basis_nm1.rank(occ)), static_cast<std::uint32_t>(i),
                        std::sqrt(static_cast<double>(n))});
    }
    return SparseOperator::from_triplets(basis_nm1.size(), basis_n.size(), std::move(trip), false);
}

std::string matrix_header(const SystemParams& params, const RescaledCoupling& coupling) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "N " << params.n_atoms() << " r " << params.n_modes() << " g " << params.interaction()
       << " g_tilde " << coupling.g_tilde << " b " << params.barrier() << " Omega " << params.phase();
    return os.str();
}

}  // namespace ringsim
