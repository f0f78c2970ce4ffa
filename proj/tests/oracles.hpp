#pragma once

// Test-side oracles, independent of the library's quadrature paths:
// adaptive 1-D quadrature, Monte Carlo volume integrals, finite-difference
// derivatives.  Every frozen constant asserted by the suites was computed
// with these.

#include <cmath>
#include <functional>

#include "zs/common.hpp"

namespace oracle {

using Fn = std::function<double(double)>;

inline double simpson_rec(const Fn& f, double a, double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// adaptive Simpson on [a, b]
inline double integrate_1d(const Fn& f, double a, double b, double tol = 1e-11, int depth = 40) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// improper integral over [a, inf) by dyadic panels until the tail stalls
inline double integrate_tail(const Fn& f, double a, double tol = 1e-11) {
    double total = 0.0, hi = a, biggest = 0.0;
    for (int k = 0; k < 80; ++k) {
        double lo = hi;
        hi = 2.0 * hi;
        double piece = integrate_1d(f, lo, hi, tol);
        total += piece;
        biggest = std::max(biggest, std::fabs(piece));
        if (k > 3 && std::fabs(piece) < tol * biggest) break;
    }
    return total;
}

// int_0^inf f
inline double integrate_half_line(const Fn& f, double split = 1.0, double tol = 1e-11) {
    return integrate_1d(f, 0.0, split, tol) + integrate_tail(f, split, tol);
}

struct McResult {
    double mean = 0.0;
    double stderr_est = 0.0;
};

// Monte Carlo integral over the ball B(0, radius) in n dimensions
inline McResult mc_ball(const std::function<double(const zs::Vec&)>& f, int dim, double radius,
                        long samples, std::uint64_t seed) {
    zs::Rng rng(seed);
    double vol = zs::unit_ball_volume(dim);
    for (int i = 0; i < dim; ++i) vol *= radius;
    double s1 = 0.0, s2 = 0.0;
    for (long i = 0; i < samples; ++i) {
        double r = radius * std::pow(rng.uniform(), 1.0 / dim);
        zs::Vec z = r * rng.direction(dim);
        double v = f(z);
        s1 += v;
        s2 += v * v;
    }
    double mean = s1 / double(samples);
    double var = std::max(0.0, s2 / double(samples) - mean * mean);
    McResult out;
    out.mean = vol * mean;
    out.stderr_est = vol * std::sqrt(var / double(samples));
    return out;
}

// k-th derivative at 0 by central differences with Richardson extrapolation
inline double derivative_at_zero(const Fn& f, int k, double h0 = 0.05) {
    auto stencil = [&](double h) {
        switch (k) {
            case 0: return f(0.0);
            case 1: return (f(h) - f(-h)) / (2.0 * h);
            case 2: return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
            default: return 0.0;
        }
    };
    // three-level Richardson in h^2
    double a0 = stencil(h0), a1 = stencil(h0 / 2.0), a2 = stencil(h0 / 4.0);
    double b0 = (4.0 * a1 - a0) / 3.0;
    double b1 = (4.0 * a2 - a1) / 3.0;
    return (16.0 * b1 - b0) / 15.0;
}

}  // namespace oracle
