#pragma once

#include <cmath>
#include <limits>

#include "ringsim/errors.hpp"

namespace ringsim::detail {

/// Safeguarded Newton iteration on a sign-changing bracket [lo, hi]. Falls
/// back to bisection whenever the Newton step leaves the bracket or stalls.
/// `fdf(x, f, df)` evaluates the function and its derivative.
template <class FDF>
double bracketed_newton(FDF&& fdf, double lo, double hi, double abs_tol = 1e-15,
                        int max_iter = 400) {
    double flo = 0.0;
    double fhi = 0.0;
    double d = 0.0;
    fdf(lo, flo, d);
    fdf(hi, fhi, d);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw ConvergenceError("root not bracketed", std::abs(flo) + std::abs(fhi));
    }
    // orient so that f(lo) < 0
    if (flo > 0.0) std::swap(lo, hi);
    double x = 0.5 * (lo + hi);
    double dx_old = std::abs(hi - lo);
    double dx = dx_old;
    double f = 0.0;
    double df = 0.0;
    fdf(x, f, df);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < max_iter; ++it) {
        const bool newton_out = ((x - hi) * df - f) * ((x - lo) * df - f) > 0.0;
        const bool slow = std::abs(2.0 * f) > std::abs(dx_old * df);
        if (newton_out || slow || df == 0.0) {
            dx_old = dx;
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        } else {
            dx_old = dx;
            dx = f / df;
            x -= dx;
        }
        if (std::abs(dx) <= abs_tol + 2.0 * eps * std::abs(x)) return x;
        fdf(x, f, df);
        if (f == 0.0) return x;
        if (f < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
    }
    throw ConvergenceError("bracketed Newton did not converge", std::abs(f));
}

}  // namespace ringsim::detail
