#include "resolvex/matgen.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "resolvex/rng.hpp"

namespace resolvex {

namespace {

constexpr double on_curve_tol = 1e-12;

using EMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

ComplexMatrix to_matrix(const EMatrix& m) {
    ComplexMatrix out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
    return out;
}

EMatrix random_unitary(std::size_t n, SequentialRng& rng) {
    EMatrix g(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex{rng.gaussian(), rng.gaussian()};
    Eigen::HouseholderQR<EMatrix> qr(g);
    EMatrix q = qr.householderQ();
    EMatrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (std::size_t i = 0; i < n; ++i) {
        Complex d = r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
        double a = std::abs(d);
        q.col(static_cast<Eigen::Index>(i)) *= (a > 0 ? d / a : Complex{1.0, 0.0});
    }
    return q;
}

double round_up_2sig(double x) {
    if (x <= 0.0) return 0.0;
    const double e = std::floor(std::log10(x));
    const double unit = std::pow(10.0, e - 1.0);
    return std::ceil(x / unit - 1e-9) * unit;
}

bool on_curve(Problem p, Complex lambda) {
    if (p == Problem::QEUE) return std::abs(std::abs(lambda) - 1.0) <= on_curve_tol;
    return std::abs(lambda.imag()) <= on_curve_tol;
}

} // namespace

std::size_t JordanSpec::dim() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += static_cast<std::size_t>(b.d);
    return n;
}

void JordanSpec::validate() const {
    if (blocks.empty()) throw BadSpec("JordanSpec needs at least one block");
    for (const auto& b : blocks) {
        if (b.d <= 0) throw BadSpec("Jordan block dimension must be positive");
        if (!std::isfinite(b.lambda.real()) || !std::isfinite(b.lambda.imag()))
            throw BadSpec("Jordan block eigenvalue must be finite");
    }
    if (!(transform_cond >= 1.0)) throw BadSpec("transform_cond must be >= 1");
}

ComplexMatrix GeneratedMatrix::jordan_matrix() const {
    ComplexMatrix j(spec.dim());
    std::size_t off = 0;
    for (const auto& b : spec.blocks) {
        for (int k = 0; k < b.d; ++k) {
            j.at(off + k, off + k) = b.lambda;
            if (k > 0) j.at(off + k, off + k - 1) = subdiag_scale;
        }
        off += static_cast<std::size_t>(b.d);
    }
    return j;
}

int GeneratedMatrix::max_block_dim() const {
    int d = 1;
    for (const auto& b : spec.blocks) d = std::max(d, b.d);
    return d;
}

std::vector<std::size_t> GeneratedMatrix::on_curve_blocks(Problem p) const {
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < spec.blocks.size(); ++l)
        if (on_curve(p, spec.blocks[l].lambda)) out.push_back(l);
    return out;
}

std::vector<ComplexVector> GeneratedMatrix::eigvec_columns(Problem p) const {
    std::vector<ComplexVector> cols;
    for (std::size_t l : on_curve_blocks(p)) cols.push_back(block_eigvecs[l]);
    return cols;
}

double GeneratedMatrix::kappa_S(Problem p) const {
    auto cols = eigvec_columns(p);
    if (cols.empty()) throw BadSpec("no on-curve eigenvectors for this problem");
    return svd_extremes(cols).kappa();
}

GeneratedMatrix GeneratedMatrix::rescaled(double r) const {
    if (!(r > 0.0)) throw BadSpec("rescale factor must be positive");
    GeneratedMatrix out = *this;
    out.A = A.scaled(1.0 / r);
    for (auto& b : out.spec.blocks) b.lambda /= r;
    out.subdiag_scale = subdiag_scale / r;
    out.alpha = alpha / r;
    return out;
}

GeneratedMatrix generate(const JordanSpec& spec) {
    spec.validate();
    const std::size_t n = spec.dim();

    GeneratedMatrix gm;
    gm.spec = spec;
    gm.subdiag_scale = 1.0;

    if (spec.identity_transform) {
        gm.T = ComplexMatrix::identity(n);
        gm.T_inv = gm.T;
        gm.kappa_bar_witness = 1.0;
        gm.A = gm.jordan_matrix();
    } else {
        SequentialRng rng(spec.seed);
        EMatrix q1 = random_unitary(n, rng);
        EMatrix q2 = random_unitary(n, rng);
        // geometric singular-value ramp from 1 down to 1/cond
        Eigen::VectorXd d(n);
        for (std::size_t i = 0; i < n; ++i)
            d(static_cast<Eigen::Index>(i)) =
                n == 1 ? 1.0 : std::pow(spec.transform_cond, -static_cast<double>(i) / static_cast<double>(n - 1));
        EMatrix t = q1 * d.asDiagonal() * q2;
        EMatrix t_inv = q2.adjoint() * d.cwiseInverse().asDiagonal() * q1.adjoint();
        gm.T = to_matrix(t);
        gm.T_inv = to_matrix(t_inv);
        // a 1x1 transform cannot be conditioned; its witness is exactly 1
        gm.kappa_bar_witness = n == 1 ? 1.0 : spec.transform_cond;
        gm.A = gm.T * gm.jordan_matrix() * gm.T_inv;
    }

    gm.alpha = round_up_2sig(spectral_norm(gm.A));
    if (gm.alpha == 0.0) gm.alpha = 1.0;  // zero matrix still needs a valid normalization

    std::size_t off = 0;
    for (const auto& b : spec.blocks) {
        const std::size_t pos = off + static_cast<std::size_t>(b.d) - 1;
        ComplexVector v(n);
        for (std::size_t r = 0; r < n; ++r) v[r] = gm.T.at(r, pos);
        const double nv = v.norm();
        for (std::size_t r = 0; r < n; ++r) v[r] /= nv;
        gm.block_eigvecs.push_back(std::move(v));
        off += static_cast<std::size_t>(b.d);
    }
    return gm;
}

bool validate_exclusion(const GeneratedMatrix& gm, Problem p, double eps_eig) {
    for (const auto& b : gm.spec.blocks) {
        if (p == Problem::QEUE) {
            const double m = std::abs(b.lambda);
            if (m > 1.0 + on_curve_tol && m < 1.0 + eps_eig) return false;
        } else {
            const double im = b.lambda.imag();
            if (im > on_curve_tol && im < eps_eig) return false;
        }
    }
    return true;
}

InputState input_state(const GeneratedMatrix& gm, const std::vector<Complex>& betas, Problem p) {
    auto cols = gm.eigvec_columns(p);
    if (betas.size() != cols.size())
        throw BadSpec("betas length must equal the number of on-curve eigenvectors");
    ComplexVector v(gm.dim());
    for (std::size_t l = 0; l < cols.size(); ++l)
        for (std::size_t r = 0; r < gm.dim(); ++r) v[r] += betas[l] * cols[l][r];
    const double nv = v.norm();
    if (nv < 1e-12) throw ZeroState();
    InputState st;
    st.psi = ComplexVector(gm.dim());
    for (std::size_t r = 0; r < gm.dim(); ++r) st.psi[r] = v[r] / nv;
    st.beta_effective.reserve(betas.size());
    for (const auto& b : betas) st.beta_effective.push_back(b / nv);
    return st;
}

ComplexMatrix pt_symmetric_2x2(double g, double s) {
    ComplexMatrix m(2);
    m.at(0, 0) = Complex{0.0, g};
    m.at(0, 1) = Complex{s, 0.0};
    m.at(1, 0) = Complex{s, 0.0};
    m.at(1, 1) = Complex{0.0, -g};
    return m;
}

} // namespace resolvex
