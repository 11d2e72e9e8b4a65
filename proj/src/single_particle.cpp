#include "ringsim/single_particle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ringsim/errors.hpp"
#include "ringsim/model.hpp"
#include "ringsim/roots.hpp"

namespace ringsim {

namespace {

// Poles of the right-hand side for phase fraction w = Omega/2pi: the
// plane-wave values m + w and m + 1 - w, sorted.
std::vector<double> poles(double w, int count) {
    std::vector<double> s;
    for (int m = 0; static_cast<int>(s.size()) < 2 * count + 4; ++m) {
        s.push_back(m + w);
        s.push_back(m + 1.0 - w);
    }
    std::sort(s.begin(), s.end());
    return s;
}

// Singularity-free form of the quantization condition, obtained by
// multiplying through with sin(pi a - Omega/2) sin(pi a + Omega/2):
//   F(a) = a (cos Omega - cos 2 pi a) - pi b sin 2 pi a.
double generic_root(double b, double phase, double lo, double hi) {
    const double c = std::cos(phase);
    auto fdf = [&](double a, double& f, double& df) {
        const double c2 = std::cos(2.0 * kPi * a);
        const double s2 = std::sin(2.0 * kPi * a);
        f = a * (c - c2) - kPi * b * s2;
        df = (c - c2) + 2.0 * kPi * a * s2 - 2.0 * kPi * kPi * b * c2;
    };
    return detail::bracketed_newton(fdf, lo, hi);
}

// Omega = pi, odd branch: a cos(pi a) + pi b sin(pi a) = 0, i.e.
// a / (pi b) = -tan(pi a).
double odd_branch_root(double b, double lo, double hi) {
    auto fdf = [&](double a, double& f, double& df) {
        const double c = std::cos(kPi * a);
        const double s = std::sin(kPi * a);
        f = a * c + kPi * b * s;
        df = c - kPi * a * s + kPi * kPi * b * c;
    };
    return detail::bracketed_newton(fdf, lo, hi);
}

}  // namespace

SingleParticleLevels levels(double barrier, double phase, int count) {
    if (!(barrier >= 0.0) || !std::isfinite(barrier)) {
        throw InvalidArgument("barrier must be finite and non-negative");
    }
    if (!(phase > 0.0 && phase < 2.0 * kPi)) {
        throw InvalidArgument("phase must lie in (0, 2 pi)");
    }
    if (count < 1) throw InvalidArgument("level count must be >= 1");

    SingleParticleLevels out{barrier, phase, {}, {}};
    const double w = phase / (2.0 * kPi);
    const bool at_pi = std::abs(w - 0.5) <= 1e-14;

    for (int mu = 0; mu < count; ++mu) {
        double a = 0.0;
        if (at_pi) {
            if (mu % 2 == 0) {
                a = 0.5 * (mu + 1);  // wave function vanishes at the barrier
            } else if (barrier == 0.0) {
                a = 0.5 * mu;
            } else {
                a = odd_branch_root(barrier, 0.5 * mu, 0.5 * mu + 1.0);
            }
        } else {
            const auto s = poles(w, count);
            a = barrier == 0.0 ? s[mu] : generic_root(barrier, phase, s[mu], s[mu + 1]);
        }
        out.alpha.push_back(a);
        out.energy.push_back(a * a);
    }
    return out;
}

double tg_gap(int n_atoms, double barrier, const TonksOptions& options) {
    if (n_atoms < 1) throw InvalidArgument("n_atoms must be >= 1");
    if (n_atoms % 2 == 0 && !options.allow_even_n) {
        throw InvalidArgument("Tonks-Girardeau gap is defined for odd N (got " +
                              std::to_string(n_atoms) + ")");
    }
    const auto lv = levels(barrier, kPi, n_atoms + 1);
    const double hi = lv.alpha[n_atoms];
    const double lo = lv.alpha[n_atoms - 1];
    return (hi - lo) * (hi + lo);
}

double tg_ground_energy(int n_atoms, double barrier) {
    if (n_atoms < 1) throw InvalidArgument("n_atoms must be >= 1");
    const auto lv = levels(barrier, kPi, n_atoms);
    double e = 0.0;
    for (double x : lv.energy) e += x;
    return e;
}

}  // namespace ringsim
