#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ringsim {

inline constexpr std::uint64_t kDefaultDimensionCap = 5'000'000;

/// Number of ways to place n bosons in r modes, C(n + r - 1, n). Saturates at
/// UINT64_MAX instead of overflowing.
std::uint64_t fock_dimension(int n_atoms, int n_modes);

/// Occupation numbers over the window {-r/2+1, ..., r/2}; entry j belongs to
/// momentum j - r/2 + 1.
class FockState {
public:
    explicit FockState(std::vector<int> occupations);

    int n_modes() const noexcept { return static_cast<int>(occ_.size()); }
    int k_min() const noexcept { return -n_modes() / 2 + 1; }
    int n_atoms() const noexcept;
    int occupation_at(int momentum) const;
    const std::vector<int>& occupations() const noexcept { return occ_; }

    bool operator==(const FockState&) const = default;

private:
    std::vector<int> occ_;
};

/// K = sum_k k n_k.
int total_K(const FockState& state);

/// Complete N-particle basis, ordered lexicographically (ascending) in the
/// occupation array read from the most negative momentum. Immutable.
class FockBasis {
public:
    FockBasis(int n_atoms, int n_modes, std::uint64_t dimension_cap = kDefaultDimensionCap);

    std::size_t size() const noexcept { return size_; }
    int n_atoms() const noexcept { return n_atoms_; }
    int n_modes() const noexcept { return n_modes_; }
    int k_min() const noexcept { return -n_modes_ / 2 + 1; }
    int k_max() const noexcept { return n_modes_ / 2; }
    int momentum_of_mode(int mode) const noexcept { return mode + k_min(); }
    int mode_of_momentum(int k) const noexcept { return k - k_min(); }

    std::span<const std::uint8_t> occupations(std::size_t index) const {
        return {occ_.data() + index * static_cast<std::size_t>(n_modes_),
                static_cast<std::size_t>(n_modes_)};
    }

    /// Dense index of an occupation array with the right particle number.
    /// O(r) via a precomputed table of partial counts.
    std::size_t rank(std::span<const std::uint8_t> occupations) const;
    std::size_t rank(const FockState& state) const;
    FockState unrank(std::size_t index) const;

    int total_K(std::size_t index) const { return total_k_[index]; }
    /// sum_k k^2 n_k, cached for the kinetic diagonal.
    double k2_moment(std::size_t index) const { return k2_[index]; }

    int min_K() const noexcept { return n_atoms_ * k_min(); }
    int max_K() const noexcept { return n_atoms_ * k_max(); }

    /// Indices of all states with total momentum K (empty if unreachable).
    std::vector<std::size_t> sector_indices(int K) const;

    /// Permutation induced by the single-particle map k -> 1 - k.
    std::vector<std::size_t> reflection_permutation() const;

private:
    int n_atoms_;
    int n_modes_;
    std::size_t size_;
    std::vector<std::uint8_t> occ_;
    std::vector<int> total_k_;
    std::vector<double> k2_;
    // skip_[(pos * (N+1) + remaining) * (N+1) + value]: number of states that
    // precede value at position pos when `remaining` atoms are left.
    std::vector<std::uint64_t> skip_;
};

FockBasis build_basis(int n_atoms, int n_modes, std::uint64_t dimension_cap = kDefaultDimensionCap);

}  // namespace ringsim
