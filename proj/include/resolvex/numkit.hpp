#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "resolvex/errors.hpp"

namespace resolvex {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major. Entries are validated finite on
// construction; values are immutable by convention after they leave the
// producing function, so they are safe to share across threads.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(const std::vector<Complex>& diag);

    std::size_t dim() const { return dim_; }
    Complex& at(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }
    const std::vector<Complex>& entries() const { return entries_; }
    std::vector<Complex>& entries() { return entries_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix scaled(Complex factor) const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;

    // Largest entry magnitude; used for singularity thresholds.
    double max_abs() const;

    void check_finite() const;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
};

class ComplexVector {
public:
    ComplexVector() = default;
    explicit ComplexVector(std::size_t dim) : entries_(dim, Complex{0.0, 0.0}) {}
    explicit ComplexVector(std::vector<Complex> entries);

    std::size_t dim() const { return entries_.size(); }
    Complex& operator[](std::size_t i) { return entries_[i]; }
    const Complex& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<Complex>& entries() const { return entries_; }

    double norm() const;
    void check_finite() const;

private:
    std::vector<Complex> entries_;
};

ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v);
ComplexVector operator-(const ComplexVector& a, const ComplexVector& b);
Complex inner(const ComplexVector& a, const ComplexVector& b);  // conjugate-linear in a

// x with ||Cx - b|| <= 1e-10 ||b|| cond(C); LU with partial pivoting.
// Throws SingularMatrix when a pivot falls below 1e-14 * max|C_ij|.
ComplexVector solve(const ComplexMatrix& c, const ComplexVector& b);

// Reusable factorization for solving against many right-hand sides.
class LuSolver {
public:
    explicit LuSolver(const ComplexMatrix& c);  // throws SingularMatrix
    ~LuSolver();
    LuSolver(LuSolver&&) noexcept;
    LuSolver& operator=(LuSolver&&) noexcept;
    LuSolver(const LuSolver&) = delete;
    LuSolver& operator=(const LuSolver&) = delete;

    ComplexVector solve(const ComplexVector& b) const;
    ComplexMatrix inverse() const;

private:
    struct Impl;
    Impl* impl_;
};

// sigma_max(C), relative accuracy far better than the contracted 1e-8.
double spectral_norm(const ComplexMatrix& c);

// sqrt(max column abs sum) * sqrt(max row abs sum); always >= spectral_norm.
double row_col_norm_bound(const ComplexMatrix& c);

struct SvdExtremes {
    double sigma_max = 0.0;
    double sigma_min_nonzero = 0.0;
    double kappa() const { return sigma_max / sigma_min_nonzero; }
};

// Largest and smallest nonzero singular value of a (possibly rectangular,
// columns <= rows) matrix given column-major as columns of length `rows`.
// Throws ZeroMatrix when every singular value is below 1e-12.
SvdExtremes svd_extremes(const std::vector<ComplexVector>& columns);
SvdExtremes svd_extremes(const ComplexMatrix& c);

// All singular values, descending.
std::vector<double> singular_values(const ComplexMatrix& c);

// Columns of the Moore-Penrose pseudo-inverse adjoint: row l of pinv(S) as a
// vector, so coefficients of x in the S basis are inner(dual[l], x).
std::vector<ComplexVector> dual_basis(const std::vector<ComplexVector>& columns);

// Matrix exponential exp(C) by scaling and squaring with Pade approximation.
ComplexMatrix expm(const ComplexMatrix& c);

} // namespace resolvex
