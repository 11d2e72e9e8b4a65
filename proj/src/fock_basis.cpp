#include "ringsim/fock_basis.hpp"

#include <limits>
#include <numeric>
#include <string>

#include "ringsim/errors.hpp"

namespace ringsim {

namespace {

// ways(m, p): distributions of p bosons over m modes
std::uint64_t ways(int m, int p) {
    if (m == 0) return p == 0 ? 1 : 0;
    return fock_dimension(p, m);
}

}  // namespace

std::uint64_t fock_dimension(int n_atoms, int n_modes) {
    if (n_atoms < 0 || n_modes < 1) return 0;
    // C(n + r - 1, n), built incrementally so intermediate values stay exact
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t c = 1;
    const int k = std::min(n_atoms, n_modes - 1);
    const int top = n_atoms + n_modes - 1;
    for (int i = 1; i <= k; ++i) {
        const std::uint64_t num = static_cast<std::uint64_t>(top - k + i);
        const std::uint64_t g = std::gcd(c, static_cast<std::uint64_t>(i));
        const std::uint64_t c_red = c / g;
        const std::uint64_t den = static_cast<std::uint64_t>(i) / g;
        const std::uint64_t num_red = num / den;  // den divides num * c_red; c_red coprime to den
        if (c_red != 0 && num_red > kMax / c_red) return kMax;
        c = c_red * num_red;
    }
    return c;
}

FockState::FockState(std::vector<int> occupations) : occ_(std::move(occupations)) {
    if (occ_.empty() || occ_.size() % 2 != 0) {
        throw InvalidArgument("a Fock state needs an even, non-zero number of modes");
    }
    for (int n : occ_) {
        if (n < 0) throw InvalidArgument("occupations must be non-negative");
    }
}

int FockState::n_atoms() const noexcept { return std::accumulate(occ_.begin(), occ_.end(), 0); }

int FockState::occupation_at(int momentum) const {
    const int j = momentum - k_min();
    if (j < 0 || j >= n_modes()) throw InvalidArgument("momentum outside the window");
    return occ_[static_cast<std::size_t>(j)];
}

int total_K(const FockState& state) {
    int K = 0;
    const int kmin = state.k_min();
    for (int j = 0; j < state.n_modes(); ++j) K += (j + kmin) * state.occupations()[j];
    return K;
}

FockBasis::FockBasis(int n_atoms, int n_modes, std::uint64_t dimension_cap)
    : n_atoms_(n_atoms), n_modes_(n_modes), size_(0) {
    if (n_atoms < 1) throw InvalidArgument("basis needs at least one atom");
    if (n_modes < 2 || n_modes % 2 != 0) throw InvalidArgument("n_modes must be even and >= 2");
    if (n_atoms > 255) throw InvalidArgument("occupations are stored in 8 bits; N <= 255");

    const std::uint64_t dim = fock_dimension(n_atoms, n_modes);
    if (dim > dimension_cap) throw DimensionCapExceeded(dim, dimension_cap);
    size_ = static_cast<std::size_t>(dim);

    const int np1 = n_atoms + 1;
    skip_.assign(static_cast<std::size_t>(n_modes) * np1 * np1, 0);
    for (int pos = 0; pos < n_modes; ++pos) {
        const int rest = n_modes - 1 - pos;
        for (int rem = 0; rem <= n_atoms; ++rem) {
            std::uint64_t acc = 0;
            for (int v = 0; v <= rem; ++v) {
                skip_[(static_cast<std::size_t>(pos) * np1 + rem) * np1 + v] = acc;
                acc += ways(rest, rem - v);
            }
        }
    }

    occ_.resize(size_ * static_cast<std::size_t>(n_modes));
    total_k_.resize(size_);
    k2_.resize(size_);

    // ascending lexicographic enumeration; the last mode takes the remainder
    std::vector<int> cur(static_cast<std::size_t>(n_modes), 0);
    cur.back() = n_atoms;
    const int kmin = k_min();
    for (std::size_t idx = 0; idx < size_; ++idx) {
        int K = 0;
        double k2 = 0.0;
        for (int j = 0; j < n_modes; ++j) {
            occ_[idx * n_modes + j] = static_cast<std::uint8_t>(cur[j]);
            const int k = j + kmin;
            K += k * cur[j];
            k2 += static_cast<double>(k) * k * cur[j];
        }
        total_k_[idx] = K;
        k2_[idx] = k2;

        // successor: rightmost position before the last that can be raised
        int carry = cur.back();
        int j = n_modes - 2;
        while (j >= 0 && carry == 0) {
            carry += cur[j];
            cur[j] = 0;
            --j;
        }
        if (j < 0) break;
        cur[j] += 1;
        // particles after j: total minus prefix
        int prefix = 0;
        for (int i = 0; i <= j; ++i) prefix += cur[i];
        for (int i = j + 1; i < n_modes; ++i) cur[i] = 0;
        cur.back() = n_atoms - prefix;
    }
}

std::size_t FockBasis::rank(std::span<const std::uint8_t> occupations) const {
    if (occupations.size() != static_cast<std::size_t>(n_modes_)) {
        throw InvalidArgument("occupation array has the wrong number of modes");
    }
    const int np1 = n_atoms_ + 1;
    int rem = n_atoms_;
    std::uint64_t r = 0;
    for (int pos = 0; pos + 1 < n_modes_; ++pos) {
        const int v = occupations[pos];
        if (v > rem) throw InvalidArgument("occupations exceed the particle number");
        r += skip_[(static_cast<std::size_t>(pos) * np1 + rem) * np1 + v];
        rem -= v;
    }
    if (occupations.back() != rem) throw InvalidArgument("occupations do not sum to N");
    return static_cast<std::size_t>(r);
}

std::size_t FockBasis::rank(const FockState& state) const {
    if (state.n_modes() != n_modes_) throw InvalidArgument("state has the wrong number of modes");
    std::vector<std::uint8_t> occ(state.occupations().size());
    for (std::size_t j = 0; j < occ.size(); ++j) {
        const int n = state.occupations()[j];
        if (n > n_atoms_) throw InvalidArgument("occupation exceeds the particle number");
        occ[j] = static_cast<std::uint8_t>(n);
    }
    return rank(occ);
}

FockState FockBasis::unrank(std::size_t index) const {
    if (index >= size_) throw InvalidArgument("index out of range");
    auto occ = occupations(index);
    return FockState(std::vector<int>(occ.begin(), occ.end()));
}

std::vector<std::size_t> FockBasis::sector_indices(int K) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size_; ++i) {
        if (total_k_[i] == K) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FockBasis::reflection_permutation() const {
    std::vector<std::size_t> perm(size_);
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(n_modes_));
    for (std::size_t i = 0; i < size_; ++i) {
        auto occ = occupations(i);
        std::copy(occ.rbegin(), occ.rend(), buf.begin());
        perm[i] = rank(buf);
    }
    return perm;
}

FockBasis build_basis(int n_atoms, int n_modes, std::uint64_t dimension_cap) {
    return FockBasis(n_atoms, n_modes, dimension_cap);
}

}  // namespace ringsim
