#include "resolvex/numkit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace resolvex {

namespace {

using EMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

Eigen::Map<const EMatrix> emap(const ComplexMatrix& m) {
    return {m.entries().data(), static_cast<Eigen::Index>(m.dim()),
            static_cast<Eigen::Index>(m.dim())};
}

Eigen::Map<const EVector> emap(const ComplexVector& v) {
    return {v.entries().data(), static_cast<Eigen::Index>(v.dim())};
}

ComplexMatrix from_eigen(const EMatrix& m) {
    ComplexMatrix out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
    return out;
}

ComplexVector from_eigen(const EVector& v) {
    std::vector<Complex> e(v.data(), v.data() + v.size());
    return ComplexVector(std::move(e));
}

void require_pivots(const Eigen::PartialPivLU<EMatrix>& lu, double max_abs) {
    const auto& diag = lu.matrixLU().diagonal();
    const double floor = 1e-14 * max_abs;
    for (Eigen::Index i = 0; i < diag.size(); ++i)
        if (std::abs(diag(i)) < floor) throw SingularMatrix();
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim)
    : dim_(dim), entries_(dim * dim, Complex{0.0, 0.0}) {
    if (dim == 0) throw BadSpec("matrix dimension must be >= 1");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim == 0) throw BadSpec("matrix dimension must be >= 1");
    if (entries_.size() != dim * dim) throw BadSpec("entry count must equal dim^2");
    check_finite();
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m.at(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out.at(c, r) = std::conj(at(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::scaled(Complex factor) const {
    ComplexMatrix out = *this;
    for (auto& e : out.entries_) e *= factor;
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw BadSpec("dimension mismatch in matrix product");
    return from_eigen(EMatrix(emap(*this) * emap(rhs)));
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw BadSpec("dimension mismatch in matrix sum");
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += rhs.entries_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw BadSpec("dimension mismatch in matrix difference");
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] -= rhs.entries_[i];
    return out;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

void ComplexMatrix::check_finite() const {
    for (const auto& e : entries_)
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
            throw BadSpec("matrix entries must be finite");
}

ComplexVector::ComplexVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
    check_finite();
}

double ComplexVector::norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e);
    return std::sqrt(s);
}

void ComplexVector::check_finite() const {
    for (const auto& e : entries_)
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
            throw BadSpec("vector entries must be finite");
}

ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v) {
    if (m.dim() != v.dim()) throw BadSpec("dimension mismatch in matrix-vector product");
    return from_eigen(EVector(emap(m) * emap(v)));
}

ComplexVector operator-(const ComplexVector& a, const ComplexVector& b) {
    if (a.dim() != b.dim()) throw BadSpec("dimension mismatch in vector difference");
    ComplexVector out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
    return out;
}

Complex inner(const ComplexVector& a, const ComplexVector& b) {
    if (a.dim() != b.dim()) throw BadSpec("dimension mismatch in inner product");
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

ComplexVector solve(const ComplexMatrix& c, const ComplexVector& b) {
    if (c.dim() != b.dim()) throw BadSpec("solve: right-hand side dimension mismatch");
    Eigen::PartialPivLU<EMatrix> lu(emap(c));
    require_pivots(lu, c.max_abs());
    return from_eigen(EVector(lu.solve(EVector(emap(b)))));
}

struct LuSolver::Impl {
    Eigen::PartialPivLU<EMatrix> lu;
    std::size_t dim;
};

LuSolver::LuSolver(const ComplexMatrix& c) : impl_(new Impl{Eigen::PartialPivLU<EMatrix>(emap(c)), c.dim()}) {
    require_pivots(impl_->lu, c.max_abs());
}

LuSolver::~LuSolver() { delete impl_; }
LuSolver::LuSolver(LuSolver&& o) noexcept : impl_(o.impl_) { o.impl_ = nullptr; }
LuSolver& LuSolver::operator=(LuSolver&& o) noexcept {
    std::swap(impl_, o.impl_);
    return *this;
}

ComplexVector LuSolver::solve(const ComplexVector& b) const {
    if (impl_->dim != b.dim()) throw BadSpec("solve: right-hand side dimension mismatch");
    return from_eigen(EVector(impl_->lu.solve(EVector(emap(b)))));
}

ComplexMatrix LuSolver::inverse() const { return from_eigen(EMatrix(impl_->lu.inverse())); }

double spectral_norm(const ComplexMatrix& c) {
    return emap(c).jacobiSvd().singularValues()(0);
}

double row_col_norm_bound(const ComplexMatrix& c) {
    const std::size_t n = c.dim();
    double max_col = 0.0, max_row = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double row_sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) row_sum += std::abs(c.at(r, k));
        max_row = std::max(max_row, row_sum);
    }
    for (std::size_t k = 0; k < n; ++k) {
        double col_sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) col_sum += std::abs(c.at(r, k));
        max_col = std::max(max_col, col_sum);
    }
    return std::sqrt(max_col) * std::sqrt(max_row);
}

namespace {

SvdExtremes extremes_of(const Eigen::VectorXd& sv) {
    if (sv.size() == 0 || sv(0) < 1e-12) throw ZeroMatrix();
    SvdExtremes out;
    out.sigma_max = sv(0);
    const double cutoff = std::max(1e-12, sv(0) * 1e-13 * static_cast<double>(sv.size()));
    out.sigma_min_nonzero = sv(0);
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) out.sigma_min_nonzero = sv(i);
    return out;
}

} // namespace

SvdExtremes svd_extremes(const std::vector<ComplexVector>& columns) {
    if (columns.empty()) throw ZeroMatrix();
    const std::size_t rows = columns[0].dim();
    if (columns.size() > rows) throw BadSpec("svd_extremes expects columns <= rows");
    Eigen::MatrixXcd s(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].dim() != rows) throw BadSpec("ragged column set");
        for (std::size_t r = 0; r < rows; ++r) s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = columns[c][r];
    }
    return extremes_of(s.jacobiSvd().singularValues());
}

SvdExtremes svd_extremes(const ComplexMatrix& c) {
    return extremes_of(emap(c).jacobiSvd().singularValues());
}

std::vector<double> singular_values(const ComplexMatrix& c) {
    Eigen::VectorXd sv = emap(c).jacobiSvd().singularValues();
    return {sv.data(), sv.data() + sv.size()};
}

std::vector<ComplexVector> dual_basis(const std::vector<ComplexVector>& columns) {
    if (columns.empty()) return {};
    const std::size_t rows = columns[0].dim();
    Eigen::MatrixXcd s(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (std::size_t r = 0; r < rows; ++r) s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = columns[c][r];
    // pinv(S) = (S^H S)^{-1} S^H for full column rank S; row l conjugated gives
    // the vector whose conjugate inner product extracts coefficient l.
    Eigen::MatrixXcd gram = s.adjoint() * s;
    Eigen::MatrixXcd pinv = gram.partialPivLu().solve(s.adjoint());
    std::vector<ComplexVector> duals;
    duals.reserve(columns.size());
    for (std::size_t l = 0; l < columns.size(); ++l) {
        ComplexVector d(rows);
        for (std::size_t r = 0; r < rows; ++r) d[r] = std::conj(pinv(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(r)));
        duals.push_back(std::move(d));
    }
    return duals;
}

ComplexMatrix expm(const ComplexMatrix& c) {
    // Pade(6) with scaling and squaring; ample for the diagnostic probes here.
    const std::size_t n = c.dim();
    double nrm = row_col_norm_bound(c);
    int squarings = 0;
    EMatrix a = emap(c);
    if (nrm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
        a /= std::pow(2.0, squarings);
    }
    const double coeff[7] = {1.0, 0.5, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
    EMatrix ident = EMatrix::Identity(n, n);
    EMatrix a2 = a * a;
    EMatrix a4 = a2 * a2;
    EMatrix a6 = a2 * a4;
    EMatrix u = a * (coeff[1] * ident + coeff[3] * a2 + coeff[5] * a4);
    EMatrix v = coeff[0] * ident + coeff[2] * a2 + coeff[4] * a4 + coeff[6] * a6;
    EMatrix num = v + u;
    EMatrix den = v - u;
    EMatrix r = den.partialPivLu().solve(num);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return from_eigen(r);
}

} // namespace resolvex
