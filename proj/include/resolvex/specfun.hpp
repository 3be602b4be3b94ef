#pragma once

#include <complex>
#include <cstdint>

namespace resolvex {

using Complex = std::complex<double>;

// exp(w) - 1 without cancellation for small |w|.
Complex complex_expm1(Complex w);

// Digamma for complex argument (reflection + recurrence + Stirling series).
// Poles at nonpositive integers are the caller's responsibility.
Complex digamma(Complex z);

// sum_{j=j_first}^{j_last} 1/(w + j), exact up to floating error, O(1) time.
Complex reciprocal_progression_sum(Complex w, std::int64_t j_first, std::int64_t j_last);

// sum_{j=0}^{N-1} 1/|c e^{2 pi i j/N} - lambda|^2 for c > 0, |lambda| != c.
// Closed form from the factorization of x^N - 1 over the roots of unity.
double circle_grid_inverse_square_sum(double c, Complex lambda, std::uint64_t n_points);

// sum_{j=j_first}^{j_last} 1/((x0 + j*h - lambda)^2 + delta^2) for real x0,h,lambda
// via digamma partial sums.
double segment_grid_inverse_square_sum(double x0, double h, double lambda, double delta,
                                       std::int64_t j_first, std::int64_t j_last);

} // namespace resolvex
