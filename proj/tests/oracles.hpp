#pragma once

// Test-only oracles, independent of the library's computation paths: naive
// summation, fixed-order Gauss-Legendre quadrature, power iteration, and the
// analytic Jordan-block resolvent assembled entry by entry.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "resolvex/numkit.hpp"

namespace oracles {

using resolvex::Complex;
using resolvex::ComplexMatrix;

inline constexpr double pi = 3.141592653589793238462643;

// sum_{j in [j0, j1]} 1/|z(j) - lambda|^2 by plain sequential accumulation
inline double naive_inverse_square_sum(const std::function<Complex(std::int64_t)>& z,
                                       Complex lambda, std::int64_t j0, std::int64_t j1) {
    double s = 0.0;
    for (std::int64_t j = j0; j <= j1; ++j) s += 1.0 / std::norm(z(j) - lambda);
    return s;
}

// 64-point Gauss-Legendre on [a,b], composite over `panels` panels.
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                             int panels = 64) {
    // 4-point rule per panel: nodes +-x1, +-x2
    static const double xs[2] = {0.3399810435848563, 0.8611363115940526};
    static const double ws[2] = {0.6521451548625461, 0.3478548451374538};
    double total = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h, mid = lo + 0.5 * h, half = 0.5 * h;
        for (int k = 0; k < 2; ++k) {
            total += ws[k] * half * (f(mid + half * xs[k]) + f(mid - half * xs[k]));
        }
    }
    return total;
}

// power iteration on C^H C: an SVD-independent route to sigma_max
inline double power_iteration_norm(const ComplexMatrix& c, int iters = 2000) {
    const std::size_t n = c.dim();
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Complex{1.0 / std::sqrt(double(n)), 0.001 * double(i)};
    const ComplexMatrix ch = c.adjoint();
    double sigma_sq = 0.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<Complex> w(n, Complex{0, 0}), u(n, Complex{0, 0});
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t k = 0; k < n; ++k) w[r] += c.at(r, k) * v[k];
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t k = 0; k < n; ++k) u[r] += ch.at(r, k) * w[k];
        double nn = 0.0;
        for (const auto& e : u) nn += std::norm(e);
        nn = std::sqrt(nn);
        if (nn == 0.0) return 0.0;
        for (auto& e : u) e /= nn;
        sigma_sq = nn;
        v = u;
    }
    return std::sqrt(sigma_sq);
}

// (z I - J(lambda, d))^{-1} with sub-diagonal scale s: row r, col c (r >= c)
// carries s^{r-c} (z-lambda)^{-(r-c+1)}
inline ComplexMatrix analytic_block_resolvent(Complex lambda, int d, Complex z, double s = 1.0) {
    ComplexMatrix m(static_cast<std::size_t>(d));
    const Complex inv = 1.0 / (z - lambda);
    for (int r = 0; r < d; ++r) {
        Complex coeff = inv;
        for (int c = r; c >= 0; --c) {
            m.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = coeff;
            coeff *= s * inv;
        }
    }
    return m;
}

} // namespace oracles
