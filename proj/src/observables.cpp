#include "ringsim/observables.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "ringsim/errors.hpp"
#include "ringsim/hamiltonian.hpp"

namespace ringsim {

AngularMomentumDistribution::AngularMomentumDistribution(int min_K, std::vector<double> probabilities)
    : min_K_(min_K), p_(std::move(probabilities)) {
    for (double x : p_) {
        if (!(x >= 0.0)) throw InvalidArgument("probabilities must be non-negative");
    }
}

double AngularMomentumDistribution::operator()(int K) const noexcept {
    if (K < min_K_ || K > max_K()) return 0.0;
    return p_[static_cast<std::size_t>(K - min_K_)];
}

double AngularMomentumDistribution::total() const noexcept {
    double s = 0.0;
    for (double x : p_) s += x;
    return s;
}

std::string AngularMomentumDistribution::to_csv() const {
    std::ostringstream os;
    os << "# K [hbar], P [probability]\nK,P\n" << std::setprecision(17);
    for (std::size_t i = 0; i < p_.size(); ++i) os << min_K_ + static_cast<int>(i) << ',' << p_[i] << '\n';
    return os.str();
}

namespace {

template <class T>
AngularMomentumDistribution distribution_impl(std::span<const T> psi, const FockBasis& basis) {
    if (psi.size() != basis.size()) throw InvalidArgument("state does not match the basis");
    std::vector<double> p(static_cast<std::size_t>(basis.max_K() - basis.min_K() + 1), 0.0);
    double n2 = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double w = std::norm(psi[i]);
        p[static_cast<std::size_t>(basis.total_K(i) - basis.min_K())] += w;
        n2 += w;
    }
    if (std::abs(n2 - 1.0) > 1e-8) throw InvalidArgument("state is not normalized");
    return AngularMomentumDistribution(basis.min_K(), std::move(p));
}

}  // namespace

AngularMomentumDistribution angular_momentum_distribution(std::span<const double> psi,
                                                          const FockBasis& basis) {
    return distribution_impl(psi, basis);
}

AngularMomentumDistribution angular_momentum_distribution(
    std::span<const std::complex<double>> psi, const FockBasis& basis) {
    return distribution_impl(psi, basis);
}

double quality(const AngularMomentumDistribution& p, int k1, int k2) { return 4.0 * p(k1) * p(k2); }

double total_variation(const AngularMomentumDistribution& p, const AngularMomentumDistribution& q) {
    const int lo = std::min(p.min_K(), q.min_K());
    const int hi = std::max(p.max_K(), q.max_K());
    double s = 0.0;
    for (int K = lo; K <= hi; ++K) s += std::abs(p(K) - q(K));
    return 0.5 * s;
}

std::vector<double> mode_occupations(std::span<const double> psi, const FockBasis& basis) {
    if (psi.size() != basis.size()) throw InvalidArgument("state does not match the basis");
    std::vector<double> n(static_cast<std::size_t>(basis.n_modes()), 0.0);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double w = psi[i] * psi[i];
        if (w == 0.0) continue;
        const auto occ = basis.occupations(i);
        for (int j = 0; j < basis.n_modes(); ++j) n[j] += w * occ[j];
    }
    return n;
}

LossReport loss_quality(std::span<const double> psi, const FockBasis& basis_n,
                        const FockBasis& basis_nm1, const LossOptions& options) {
    if (psi.size() != basis_n.size()) throw InvalidArgument("state does not match the basis");
    double n2 = 0.0;
    for (double c : psi) n2 += c * c;
    if (std::abs(n2 - 1.0) > 1e-8) throw InvalidArgument("state is not normalized");

    const int n_atoms = basis_n.n_atoms();
    const auto occupations = mode_occupations(psi, basis_n);
    LossReport report{n_atoms, {}, 0.0, 0.0};
    std::vector<double> lost(basis_nm1.size());
    for (int mode = 0; mode < basis_n.n_modes(); ++mode) {
        const int k = basis_n.momentum_of_mode(mode);
        LossEntry e{k, occupations[mode], occupations[mode], 0.0, false, {}};
        report.occupation_sum += e.occupation;
        if (e.occupation <= options.threshold) {
            e.skipped = true;
            e.weight = options.weighting == LossWeighting::pre_loss ? e.occupation : 0.0;
            report.entries.push_back(std::move(e));
            continue;
        }
        const auto a_k = loss_operator(k, basis_n, basis_nm1);
        a_k.apply(psi, lost);
        const double scale = 1.0 / std::sqrt(e.occupation);
        for (double& c : lost) c *= scale;
        const auto dist = angular_momentum_distribution(lost, basis_nm1);
        e.quality = quality(dist, -k, n_atoms - k);
        if (options.weighting == LossWeighting::post_loss) {
            e.weight = mode_occupations(lost, basis_nm1)[mode];
        }
        if (options.keep_distributions) e.after = dist;
        report.mean_quality += e.quality * e.weight / n_atoms;
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace ringsim
