#include <cmath>
#include <complex>

#include "doctest.h"
#include "ringsim/errors.hpp"
#include "ringsim/hamiltonian.hpp"
#include "ringsim/observables.hpp"
#include "ringsim/oracles.hpp"
#include "ringsim/pipeline.hpp"

using namespace ringsim;

namespace {

std::vector<double> ground_state(const RingModel& model, const SystemParams& p) {
    return solve_point(model, p).solution.eigenvectors[0];
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("a single Fock state is a point mass") {
    const FockBasis basis(3, 4);
    std::vector<double> psi(basis.size(), 0.0);
    const auto i = basis.rank(FockState({1, 1, 0, 1}));
    psi[i] = 1.0;
    const auto p = angular_momentum_distribution(psi, basis);
    CHECK(p(1) == 1.0);
    CHECK(p.total() == 1.0);
    CHECK(quality(p, 0, 3) == 0.0);
}

TEST_CASE("quality examples") {
    CHECK(quality(AngularMomentumDistribution(0, {0.5, 0.5}), 0, 1) == 1.0);
    CHECK(quality(AngularMomentumDistribution(0, {0.4, 0.0, 0.6}), 0, 2) == doctest::Approx(0.96));
    CHECK(quality(AngularMomentumDistribution(0, {1.0}), 0, 5) == 0.0);
}

TEST_CASE("distribution rejects unnormalized states and negative probabilities") {
    const FockBasis basis(2, 4);
    std::vector<double> psi(basis.size(), 0.0);
    psi[0] = 1.1;
    CHECK_THROWS_AS(angular_momentum_distribution(psi, basis), InvalidArgument);
    CHECK_THROWS_AS(AngularMomentumDistribution(0, {-0.1, 1.1}), InvalidArgument);
}

TEST_CASE("distribution CSV") {
    const auto csv = AngularMomentumDistribution(-1, {0.25, 0.75}).to_csv();
    CHECK(csv.find("K,P\n-1,0.25\n0,0.75\n") != std::string::npos);
}

TEST_CASE("complex and real states give the same distribution") {
    const RingModel model(3, 8);
    const auto psi = ground_state(model, SystemParams(3, 8, 1.0, 0.01, kPi));
    std::vector<std::complex<double>> z(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) z[i] = psi[i] * std::polar(1.0, 0.77);
    const auto a = angular_momentum_distribution(psi, model.basis());
    const auto b = angular_momentum_distribution(z, model.basis());
    CHECK(total_variation(a, b) < 1e-14);
}

TEST_CASE("reflection symmetry P(K) = P(N-K) at Omega = pi") {
    SolverOptions opt;
    opt.tol = 1e-12;
    for (double g : {0.3, 1.0, 30.0}) {
        const RingModel model(5, 10);
        const auto psi = solve_point(model, SystemParams(5, 10, g, 0.008, kPi), CouplingOrder::leading, 2, opt)
                             .solution.eigenvectors[0];
        const auto p = angular_momentum_distribution(psi, model.basis());
        CHECK(p.total() == doctest::Approx(1.0).epsilon(1e-12));
        for (int K = p.min_K(); K <= p.max_K(); ++K) CHECK(std::abs(p(K) - p(5 - K)) < 1e-10);
    }
}

TEST_CASE("near the splitting minimum the symmetry holds to residual over gap") {
    // an eigenvector error of size residual/gap mixes in the opposite-parity
    // partner level, which is the only source of asymmetry
    SolverOptions opt;
    opt.tol = 1e-12;
    const RingModel model(5, 10);
    const auto s = solve_point(model, SystemParams(5, 10, 0.05, 0.008, kPi), CouplingOrder::leading, 2, opt).solution;
    const auto p = angular_momentum_distribution(s.eigenvectors[0], model.basis());
    const double bound = 10.0 * s.max_residual() / s.gap();
    for (int K = p.min_K(); K <= p.max_K(); ++K) CHECK(std::abs(p(K) - p(5 - K)) < bound);
}

TEST_CASE("non-interacting ground state is the binomial condensate") {
    const RingModel model(5, 20);
    const auto psi = ground_state(model, SystemParams(5, 20, 0.0, 0.008, kPi));
    CHECK(total_variation(angular_momentum_distribution(psi, model.basis()), binomial_PK(5)) < 1e-3);
}

TEST_CASE("ideal NOON state does not survive a loss") {
    const int n = 4;
    const FockBasis bn(n, 4);
    const FockBasis bm(n - 1, 4);
    std::vector<double> psi(bn.size(), 0.0);
    psi[bn.rank(FockState({0, n, 0, 0}))] = 1.0 / std::sqrt(2.0);
    psi[bn.rank(FockState({0, 0, n, 0}))] = 1.0 / std::sqrt(2.0);
    CHECK(quality(angular_momentum_distribution(psi, bn), 0, n) == doctest::Approx(1.0));
    LossOptions opt;
    opt.keep_distributions = true;
    const auto rep = loss_quality(psi, bn, bm, opt);
    CHECK(rep.mean_quality == doctest::Approx(0.0));
    CHECK(rep.occupation_sum == doctest::Approx(n));
    for (const auto& e : rep.entries) {
        CHECK(e.quality == doctest::Approx(0.0));
        if (e.momentum == 0) CHECK(e.after(0) == doctest::Approx(1.0));
        if (e.momentum == 1) CHECK(e.after(n - 1) == doctest::Approx(1.0));
    }
}

TEST_CASE("loss report invariants") {
    const RingModel model(4, 8);
    const FockBasis bm(3, 8);
    const auto psi = ground_state(model, SystemParams(4, 8, 20.0, 0.008, kPi));
    const auto rep = loss_quality(psi, model.basis(), bm);
    CHECK(rep.occupation_sum == doctest::Approx(4.0).epsilon(1e-10));
    double weights = 0.0;
    for (const auto& e : rep.entries) {
        CHECK(e.quality >= 0.0);
        CHECK(e.quality <= 1.0 + 1e-12);
        weights += e.weight;
    }
    CHECK(weights == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(rep.mean_quality >= 0.0);
    CHECK(rep.mean_quality <= 1.0);
}

TEST_CASE("loss quality is invariant under a global sign and renormalization") {
    const RingModel model(3, 8);
    const FockBasis bm(2, 8);
    auto psi = ground_state(model, SystemParams(3, 8, 5.0, 0.01, kPi));
    const double q = loss_quality(psi, model.basis(), bm).mean_quality;
    for (double& c : psi) c *= -3.0;
    CHECK_THROWS_AS(loss_quality(psi, model.basis(), bm), InvalidArgument);
    double n2 = 0.0;
    for (double c : psi) n2 += c * c;
    for (double& c : psi) c /= std::sqrt(n2);
    CHECK(loss_quality(psi, model.basis(), bm).mean_quality == doctest::Approx(q).epsilon(1e-12));
}

TEST_CASE("losing an atom from a condensate leaves the N-1 condensate") {
    const SystemParams p(4, 8, 0.0, 0.01, kPi);
    const RingModel big(4, 8);
    const RingModel small(3, 8);
    const auto psi = ground_state(big, p);
    const auto smaller = angular_momentum_distribution(ground_state(small, p.with_atoms(3)), small.basis());
    LossOptions opt;
    opt.keep_distributions = true;
    for (const auto& e : loss_quality(psi, big.basis(), small.basis(), opt).entries) {
        if (e.skipped || e.occupation < 1e-6) continue;
        CHECK(total_variation(e.after, smaller) < 1e-8);
    }
}

TEST_CASE("post-loss weighting uses occupations of the reduced state") {
    const RingModel model(3, 6);
    const FockBasis bm(2, 6);
    const auto psi = ground_state(model, SystemParams(3, 6, 4.0, 0.02, kPi));
    LossOptions opt;
    opt.weighting = LossWeighting::post_loss;
    const auto rep = loss_quality(psi, model.basis(), bm, opt);
    for (const auto& e : rep.entries) {
        if (e.skipped) {
            CHECK(e.weight == 0.0);
            continue;
        }
        auto lost = loss_operator(e.momentum, model.basis(), bm).apply(psi);
        for (double& c : lost) c /= std::sqrt(e.occupation);
        CHECK(e.weight == doctest::Approx(mode_occupations(lost, bm)[bm.mode_of_momentum(e.momentum)]));
    }
}

}
