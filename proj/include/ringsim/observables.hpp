#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ringsim/fock_basis.hpp"

namespace ringsim {

/// Probability of each integer total angular momentum K (units hbar).
class AngularMomentumDistribution {
public:
    AngularMomentumDistribution() = default;
    AngularMomentumDistribution(int min_K, std::vector<double> probabilities);

    int min_K() const noexcept { return min_K_; }
    int max_K() const noexcept { return min_K_ + static_cast<int>(p_.size()) - 1; }
    /// Zero outside the stored range.
    double operator()(int K) const noexcept;
    double total() const noexcept;
    const std::vector<double>& probabilities() const noexcept { return p_; }

    /// Two-column CSV "K,P" with a '#' header line.
    std::string to_csv() const;

private:
    int min_K_ = 0;
    std::vector<double> p_;
};

/// P(K) = sum of |c_i|^2 over basis states with total momentum K.
/// Throws InvalidArgument if | ||psi||^2 - 1 | > 1e-8.
AngularMomentumDistribution angular_momentum_distribution(std::span<const double> psi,
                                                          const FockBasis& basis);
AngularMomentumDistribution angular_momentum_distribution(
    std::span<const std::complex<double>> psi, const FockBasis& basis);

/// Q = 4 P(K1) P(K2).
double quality(const AngularMomentumDistribution& p, int k1, int k2);

/// Total variation distance 1/2 sum_K |P(K) - Q(K)|.
double total_variation(const AngularMomentumDistribution& p, const AngularMomentumDistribution& q);

/// <a+_k a_k> for every mode of the window, indexed by mode.
std::vector<double> mode_occupations(std::span<const double> psi, const FockBasis& basis);

enum class LossWeighting {
    pre_loss,   // n_k = <Psi| a+_k a_k |Psi>
    post_loss,  // n_k = <Psi_k^[-1]| a+_k a_k |Psi_k^[-1]>
};

struct LossOptions {
    double threshold = 1e-12;
    LossWeighting weighting = LossWeighting::pre_loss;
    bool keep_distributions = false;
};

struct LossEntry {
    int momentum;
    double occupation;       // pre-loss <a+_k a_k>
    double weight;           // n_k used in the average
    double quality;          // Q_k = 4 P(-k) P(N - k) after the loss
    bool skipped;            // occupation below threshold
    AngularMomentumDistribution after;  // only with keep_distributions
};

struct LossReport {
    int n_atoms;
    std::vector<LossEntry> entries;
    double occupation_sum;
    double mean_quality;  // Qbar^[-1] = sum_k Q_k n_k / N
};

/// Robustness of a ground state to losing one atom of known momentum.
/// Requires basis_nm1 to hold N-1 atoms over the same window.
LossReport loss_quality(std::span<const double> psi, const FockBasis& basis_n,
                        const FockBasis& basis_nm1, const LossOptions& options = {});

}  // namespace ringsim
