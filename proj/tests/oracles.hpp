#pragma once

// Test-only reference computations, kept independent of the library's own
// quadrature and algebra paths: adaptive Simpson instead of midpoint panels,
// trapezoid + Richardson extrapolation for refined integrals, and direct
// expansion for planted-root polynomials.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

using Cx = std::complex<double>;

inline double simpson(const std::function<double(double)>& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double left = simpson(f, a, m);
    double right = simpson(f, m, b);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson quadrature over [a,b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
    return adaptive_simpson_rec(f, a, b, simpson(f, a, b), tol, 48);
}

/// Richardson-extrapolated trapezoid refinement over [a,b].
inline double richardson_trapezoid(const std::function<double(double)>& f, double a, double b,
                                   double tol = 1e-12) {
    long n = 64;
    auto trap = [&](long m) {
        double h = (b - a) / static_cast<double>(m);
        double s = 0.5 * (f(a) + f(b));
        for (long i = 1; i < m; ++i) s += f(a + h * static_cast<double>(i));
        return s * h;
    };
    double prev = trap(n);
    for (int it = 0; it < 18; ++it) {
        n *= 2;
        double cur = trap(n);
        double extrap = (4.0 * cur - prev) / 3.0;
        if (std::abs(cur - prev) < tol) return extrap;
        prev = cur;
    }
    return prev;
}

/// Reference convolution (f * phi_t)(x) over a window by adaptive Simpson.
inline double convolve(const std::function<double(double)>& f,
                       const std::function<double(double)>& kernel_t, double x, double window,
                       double tol = 1e-9) {
    auto g = [&](double u) { return f(x - u) * kernel_t(u); };
    // Split at 0 so the kernel peak sits on a panel boundary.
    return integrate(g, -window, 0.0, 0.5 * tol) + integrate(g, 0.0, window, 0.5 * tol);
}

inline std::vector<Cx> expand_from_roots(Cx lead, const std::vector<Cx>& roots) {
    std::vector<Cx> c{lead};
    for (Cx r : roots) {
        std::vector<Cx> next(c.size() + 1, Cx(0.0));
        for (size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= c[i] * r;
        }
        c = next;
    }
    return c;
}

}  // namespace oracles
