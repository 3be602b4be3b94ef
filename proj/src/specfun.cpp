#include "resolvex/specfun.hpp"

#include <cmath>

namespace resolvex {

namespace {
constexpr double pi = 3.141592653589793238462643;
}

Complex complex_expm1(Complex w) {
    // e^{x+iy} - 1 = expm1(x) cos y - 2 sin^2(y/2) + i e^x sin y
    const double x = w.real(), y = w.imag();
    if (x > 1.0 || x < -1.0 || std::abs(y) > 1.0)
        return std::exp(w) - 1.0;
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

namespace {

// Stirling series, valid for large |z| with Re(z) > 0.
Complex digamma_asymptotic(Complex z) {
    // Bernoulli B_{2n}/(2n): 1/12, -1/120, 1/252, -1/240, 1/132, -691/32760, 1/12
    static const double b[7] = {1.0 / 12.0,  -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0,
                                1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0};
    Complex inv = 1.0 / z;
    Complex inv2 = inv * inv;
    Complex sum = std::log(z) - 0.5 * inv;
    Complex p = inv2;
    for (int k = 0; k < 7; ++k) {
        sum -= b[k] * p;
        p *= inv2;
    }
    return sum;
}

Complex cot_pi(Complex z) {
    // cot(pi z); saturates to -i sign(Im z) for large |Im z|
    const double y = pi * z.imag();
    if (y > 20.0) return {0.0, -1.0};
    if (y < -20.0) return {0.0, 1.0};
    Complex w = pi * z;
    return std::cos(w) / std::sin(w);
}

} // namespace

Complex digamma(Complex z) {
    if (z.real() < 0.5) {
        // reflection: psi(z) = psi(1-z) - pi cot(pi z)
        return digamma(1.0 - z) - pi * cot_pi(z);
    }
    Complex shift{0.0, 0.0};
    while (std::abs(z) < 16.0) {
        shift -= 1.0 / z;
        z += 1.0;
    }
    return digamma_asymptotic(z) + shift;
}

Complex reciprocal_progression_sum(Complex w, std::int64_t j_first, std::int64_t j_last) {
    if (j_last < j_first) return {0.0, 0.0};
    const std::int64_t count = j_last - j_first + 1;
    if (count <= 64) {
        Complex s{0.0, 0.0};
        for (std::int64_t j = j_first; j <= j_last; ++j) s += 1.0 / (w + static_cast<double>(j));
        return s;
    }
    return digamma(w + static_cast<double>(j_last) + 1.0) - digamma(w + static_cast<double>(j_first));
}

double circle_grid_inverse_square_sum(double c, Complex lambda, std::uint64_t n_points) {
    const double nd = static_cast<double>(n_points);
    const double mag = std::abs(lambda);
    if (mag == 0.0) return nd / (c * c);
    // 1/|c w^j - lambda|^2 in partial fractions over u = w^j and conj; summing with
    // sum_j 1/(x - w^j) = N x^{N-1}/(x^N - 1) gives, with q = lambda/c:
    //   S = N/(c^2 - |lambda|^2) * [ q^N/(1 - q^N) + 1/(1 - conj(q)^N) ],  |q| < 1
    // and the mirrored form in c/lambda for |q| > 1.
    const double denom = (c - mag) * (c + mag);
    if (mag < c) {
        const Complex q = lambda / c;
        const Complex qn = std::exp(nd * std::log(q));
        const Complex one_minus_qn = -complex_expm1(nd * std::log(q));
        const Complex one_minus_qcn = -complex_expm1(nd * std::log(std::conj(q)));
        const Complex val = qn / one_minus_qn + 1.0 / one_minus_qcn;
        return nd / denom * val.real();
    }
    const Complex p = c / lambda;  // |p| < 1
    const Complex pcn = std::exp(nd * std::log(std::conj(p)));
    const Complex one_minus_pn = -complex_expm1(nd * std::log(p));
    const Complex one_minus_pcn = -complex_expm1(nd * std::log(std::conj(p)));
    const Complex val = -1.0 / one_minus_pn - pcn / one_minus_pcn;
    return nd / denom * val.real();
}

double segment_grid_inverse_square_sum(double x0, double h, double lambda, double delta,
                                       std::int64_t j_first, std::int64_t j_last) {
    if (j_last < j_first) return 0.0;
    // 1/(u^2 + d^2) = Im[1/(u - i d)]/d with u = x0 + j h - lambda
    const Complex w = Complex{x0 - lambda, -delta} / h;
    const Complex s = reciprocal_progression_sum(w, j_first, j_last);
    return s.imag() / (h * delta);
}

} // namespace resolvex
