#include "resolvex/resolvent.hpp"

#include <cmath>

#include "resolvex/kreiss.hpp"
#include "resolvex/parallel.hpp"
#include "resolvex/rng.hpp"
#include "resolvex/specfun.hpp"

namespace resolvex {

namespace {

constexpr double pi = 3.141592653589793238462643;
constexpr double two_pi = 2.0 * pi;

} // namespace

ResolventSystem build_system(const GeneratedMatrix& gm, const DiscretizedCurve& dcurve, Problem p) {
    if (p == Problem::QEUE && dcurve.curve().kind() != CurveKind::unit_circle)
        throw BadSpec("QEUE system needs the unit-circle curve");
    if (p == Problem::QERE && dcurve.curve().kind() != CurveKind::real_segment)
        throw BadSpec("QERE system needs the real-segment curve");

    // Grid points never sit on the spectrum: check the nearest grid index for
    // each eigenvalue instead of scanning the (possibly astronomical) grid.
    const std::uint64_t n = dcurve.n();
    for (const auto& b : gm.spec.blocks) {
        double t = 0.0;
        if (p == Problem::QEUE) {
            double arg = std::atan2(b.lambda.imag(), b.lambda.real()) / two_pi;
            if (arg < 0.0) arg += 1.0;
            t = arg;
        } else {
            t = std::min(1.0, std::max(0.0, (b.lambda.real() / dcurve.curve().rho() + 1.0) / 2.0));
        }
        const std::int64_t j0 = static_cast<std::int64_t>(std::llround(t * static_cast<double>(n)));
        for (std::int64_t dj = -2; dj <= 2; ++dj) {
            std::int64_t j = j0 + dj;
            if (dcurve.curve().closed()) {
                j %= static_cast<std::int64_t>(n);
                if (j < 0) j += static_cast<std::int64_t>(n);
            } else {
                if (j < 0 || j >= static_cast<std::int64_t>(n)) continue;
            }
            if (std::abs(dcurve.z(static_cast<std::uint64_t>(j)) - b.lambda) < 1e-10)
                throw SpectrumOnContour();
        }
    }

    ResolventSystem sys;
    sys.gm = gm;
    sys.dcurve = dcurve;
    sys.problem = p;
    if (p == Problem::QEUE) {
        sys.alpha_M = (1.0 + dcurve.delta()) + gm.alpha;
    } else {
        const double rho = dcurve.curve().rho();
        sys.alpha_M = std::sqrt(rho * rho + dcurve.delta() * dcurve.delta()) + gm.alpha;
    }
    sys.mode = SolveMode::analytic;  // gm always carries exact (T, J)
    return sys;
}

double prefactor_squared(Problem p, const DiscretizedCurve& dcurve) {
    const double delta = dcurve.delta();
    const double nd = static_cast<double>(dcurve.n());
    if (p == Problem::QEUE) return delta * (2.0 + delta) / nd;
    const double rho = dcurve.curve().rho();
    return 2.0 * rho * delta / (pi * nd);
}

Complex ResolventState::raw_amplitude(std::size_t l, std::uint64_t j) const {
    return 1.0 / (dcurve.z(j) - components[l].lambda);
}

double ResolventState::block_mass(std::uint64_t j) const {
    double s = 0.0;
    const Complex* p = joint.data() + j * sys_dim;
    for (std::size_t k = 0; k < sys_dim; ++k) s += std::norm(p[k]);
    return s;
}

ComplexVector ResolventState::system_block(std::uint64_t j) const {
    ComplexVector v(sys_dim);
    const Complex* p = joint.data() + j * sys_dim;
    for (std::size_t k = 0; k < sys_dim; ++k) v[k] = p[k];
    return v;
}

void jordan_resolvent_apply(const JordanSpec& spec, double subdiag_scale, Complex z,
                            const ComplexVector& in, ComplexVector& out) {
    std::size_t off = 0;
    for (const auto& b : spec.blocks) {
        const Complex inv = 1.0 / (z - b.lambda);
        // (z I - J)^{-1} is lower-triangular Toeplitz: row r, col c carries
        // s^{r-c} (z-lambda)^{-(r-c+1)}
        for (int r = b.d - 1; r >= 0; --r) {
            Complex acc{0.0, 0.0};
            Complex coeff = inv;
            for (int c = r; c >= 0; --c) {
                acc += coeff * in[off + static_cast<std::size_t>(c)];
                coeff *= subdiag_scale * inv;
            }
            out[off + static_cast<std::size_t>(r)] = acc;
        }
        off += static_cast<std::size_t>(b.d);
    }
}

ResolventState resolvent_state(const ResolventSystem& sys, const ComplexVector& psi,
                               const ResolventOptions& opts) {
    const GeneratedMatrix& gm = sys.gm;
    const std::size_t dim = gm.dim();
    if (psi.dim() != dim) throw BadSpec("resolvent_state: psi dimension mismatch");
    if (std::abs(psi.norm() - 1.0) > 1e-8) throw BadSpec("resolvent_state: psi must be normalized");

    const auto blocks = gm.on_curve_blocks(sys.problem);
    const auto cols = gm.eigvec_columns(sys.problem);
    if (cols.empty()) throw BadSpec("resolvent_state: no on-curve eigenvectors");
    const auto duals = dual_basis(cols);

    ResolventState st;
    st.problem = sys.problem;
    st.dcurve = sys.dcurve;
    st.prefactor = std::sqrt(prefactor_squared(sys.problem, sys.dcurve));
    st.sys_dim = dim;
    st.eigvecs = cols;
    ComplexVector recon(dim);
    for (std::size_t l = 0; l < cols.size(); ++l) {
        EigComponent comp;
        comp.lambda = gm.spec.blocks[blocks[l]].lambda;
        comp.beta = inner(duals[l], psi);
        comp.block = blocks[l];
        st.components.push_back(comp);
        for (std::size_t r = 0; r < dim; ++r) recon[r] += comp.beta * cols[l][r];
    }
    if ((psi - recon).norm() > 1e-8)
        throw BadSpec("resolvent_state: psi is not expressible in the on-curve eigenvectors");

    const std::uint64_t n = sys.dcurve.n();
    const bool can_materialize = n <= opts.joint_entry_cap / dim;
    if (!can_materialize && opts.require_materialized)
        throw InfeasibleGrid("joint state exceeds the materialization cap");

    const SolveMode mode = opts.mode.value_or(sys.mode);

    if (can_materialize) {
        st.joint.assign(n * dim, Complex{0.0, 0.0});
        const double pref = st.prefactor;
        if (mode == SolveMode::direct) {
            parallel_for(n, [&](std::uint64_t j) {
                const Complex z = sys.dcurve.z(j);
                ComplexMatrix m(dim);
                for (std::size_t r = 0; r < dim; ++r) {
                    for (std::size_t c2 = 0; c2 < dim; ++c2) m.at(r, c2) = -gm.A.at(r, c2);
                    m.at(r, r) += z;
                }
                ComplexVector x;
                try {
                    x = solve(m, psi);
                } catch (const SingularMatrix&) {
                    throw SpectrumOnContour();
                }
                for (std::size_t r = 0; r < dim; ++r) st.joint[j * dim + r] = pref * x[r];
            }, 16);
        } else {
            const ComplexVector w = gm.T_inv * psi;
            parallel_for(n, [&](std::uint64_t j) {
                const Complex z = sys.dcurve.z(j);
                ComplexVector y(dim);
                jordan_resolvent_apply(gm.spec, gm.subdiag_scale, z, w, y);
                const ComplexVector v = gm.T * y;
                for (std::size_t r = 0; r < dim; ++r) st.joint[j * dim + r] = pref * v[r];
            }, 16);
        }
        const double norm_sq = chunked_reduce<double>(
            st.joint.size(), 0.0,
            [&](std::uint64_t b, std::uint64_t e) {
                double s = 0.0;
                for (std::uint64_t i = b; i < e; ++i) s += std::norm(st.joint[i]);
                return s;
            },
            [](double a, double b2) { return a + b2; });
        st.norm = std::sqrt(norm_sq);

        if (opts.perturb_eps_st > 0.0) {
            // solver accuracy model: normalized state gains eps_st/2 relative noise
            CounterRng rng(opts.perturb_seed);
            std::vector<Complex> noise(st.joint.size());
            double nn = 0.0;
            for (std::uint64_t i = 0; i < noise.size(); ++i) {
                noise[i] = Complex{rng.gaussian(2 * i), rng.gaussian(2 * i + 1)};
                nn += std::norm(noise[i]);
            }
            const double scale = (opts.perturb_eps_st / 2.0) * st.norm / std::sqrt(nn);
            for (std::uint64_t i = 0; i < noise.size(); ++i) st.joint[i] += scale * noise[i];
            st.perturbed = true;
            double ns = 0.0;
            for (const auto& e : st.joint) ns += std::norm(e);
            st.norm = std::sqrt(ns);
        }
    } else {
        // Parametric state: norm from the exact pairwise cross sums.
        const double pref_sq = prefactor_squared(sys.problem, sys.dcurve);
        double norm_sq = 0.0;
        for (std::size_t l = 0; l < st.components.size(); ++l) {
            for (std::size_t m = 0; m < st.components.size(); ++m) {
                const Complex cross = full_cross_sum(sys.dcurve, st.components[l].lambda,
                                                     st.components[m].lambda);
                const Complex gram = inner(st.eigvecs[l], st.eigvecs[m]);
                norm_sq += (std::conj(st.components[l].beta) * st.components[m].beta * cross * gram).real() * pref_sq;
            }
        }
        st.norm = std::sqrt(std::max(0.0, norm_sq));
    }
    return st;
}

MInverseCheck m_inverse_norm_bound(const ResolventSystem& sys, double kreiss_value) {
    const double delta = sys.dcurve.delta();
    MInverseCheck chk;
    chk.bound = kreiss_value / delta;

    const std::uint64_t n = sys.dcurve.n();
    double actual = 0.0;
    auto eval = [&](std::uint64_t j) {
        double v;
        try {
            v = resolvent_norm(sys.gm.A, sys.dcurve.z(j));
        } catch (const ContourHitsSpectrum&) {
            throw SpectrumOnContour();
        }
        if (v > actual) actual = v;
    };
    if (n <= (std::uint64_t(1) << 14)) {
        for (std::uint64_t j = 0; j < n; ++j) eval(j);
    } else {
        // the per-block resolvent norm peaks where the grid approaches an
        // eigenvalue: probe those neighborhoods plus a coarse sweep
        for (const auto& b : sys.gm.spec.blocks) {
            double t;
            try {
                t = curve_parameter(sys.dcurve.curve(), b.lambda);
            } catch (const UnsupportedCurve&) {
                continue;
            }
            const std::int64_t j0 = static_cast<std::int64_t>(std::llround(t * static_cast<double>(n)));
            for (std::int64_t dj = -8; dj <= 8; ++dj) {
                std::int64_t j = j0 + dj;
                if (sys.dcurve.curve().closed()) {
                    j %= static_cast<std::int64_t>(n);
                    if (j < 0) j += static_cast<std::int64_t>(n);
                } else if (j < 0 || j >= static_cast<std::int64_t>(n)) {
                    continue;
                }
                eval(static_cast<std::uint64_t>(j));
            }
        }
        const std::uint64_t stride = n / 4096;
        for (std::uint64_t j = 0; j < n; j += stride) eval(j);
    }
    chk.actual_max = actual;
    if (actual > chk.bound * (1.0 + 1e-6))
        throw BoundViolated("max_j ||(z_j I - A)^{-1}|| exceeds kreiss_value/delta; Kreiss estimate under-sampled");
    return chk;
}

// ---- mass machinery --------------------------------------------------------

DirectMass direct_mass_sums(const std::vector<Complex>& points, Complex lambda,
                            const WindowProjector& w) {
    struct Acc {
        double win = 0.0, full = 0.0;
    };
    const Acc acc = chunked_reduce<Acc>(
        points.size(), Acc{},
        [&](std::uint64_t b, std::uint64_t e) {
            Acc a;
            for (std::uint64_t j = b; j < e; ++j) {
                const double term = 1.0 / std::norm(points[j] - lambda);
                a.full += term;
                if (w.contains(j)) a.win += term;
            }
            return a;
        },
        [](Acc a, Acc b2) { return Acc{a.win + b2.win, a.full + b2.full}; });
    return {acc.win, acc.full};
}

double discretization_bound(const DiscretizedCurve& dcurve) {
    const double nd = static_cast<double>(dcurve.n());
    const double delta = dcurve.delta();
    if (dcurve.curve().kind() == CurveKind::unit_circle)
        return (3.0 * std::sqrt(2.0) * pi + 6.0) / (nd * delta * delta);
    if (dcurve.curve().kind() == CurveKind::real_segment)
        return 5.0 * dcurve.curve().rho() / (pi * nd * delta * delta);
    throw UnsupportedCurve("no discretization bound registered for custom curves");
}

namespace {

// Closed-form window integrals of the normalized densities.
double window_integral_circle(double delta, double eps_t) {
    if (eps_t >= 0.5) return 1.0;
    return (2.0 / pi) * std::atan(((2.0 + delta) / delta) * std::tan(pi * eps_t));
}

double segment_antiderivative(double rho, double delta, double lambda, double t) {
    return std::atan((rho * (2.0 * t - 1.0) - lambda) / delta) / pi;
}

double window_integral_segment(double rho, double delta, double lambda, double t_lo, double t_hi) {
    t_lo = std::max(0.0, t_lo);
    t_hi = std::min(1.0, t_hi);
    if (t_hi <= t_lo) return 0.0;
    return segment_antiderivative(rho, delta, lambda, t_hi) -
           segment_antiderivative(rho, delta, lambda, t_lo);
}

// Exact window sum on the circle grid: sum over j in [first,last] of
// 1/((c-m)^2 + 4 c m sin^2(pi(j/N - t_lambda))). Periodic in j, so modular
// windows evaluate without wrapping.
double circle_window_sum(std::uint64_t n, double delta, Complex lambda, double t_lambda,
                         std::int64_t first, std::int64_t last) {
    if (last < first) return 0.0;
    const double c = 1.0 + delta;
    const double m = std::abs(lambda);
    const double base = (c - m) * (c - m);
    const double cross = 4.0 * c * m;
    const double nd = static_cast<double>(n);
    const std::uint64_t count = static_cast<std::uint64_t>(last - first + 1);
    return chunked_reduce<double>(
        count, 0.0,
        [&](std::uint64_t b, std::uint64_t e) {
            double s = 0.0;
            for (std::uint64_t k = b; k < e; ++k) {
                const double t = static_cast<double>(first + static_cast<std::int64_t>(k)) / nd;
                const double sn = std::sin(pi * (t - t_lambda));
                s += 1.0 / (base + cross * sn * sn);
            }
            return s;
        },
        [](double a, double b2) { return a + b2; });
}

} // namespace

MassSums eig_mass_sums(const DiscretizedCurve& dcurve, Complex lambda, const WindowProjector& w,
                       double pref_sq) {
    const CurveKind kind = dcurve.curve().kind();
    const double delta = dcurve.delta();
    const std::uint64_t n = dcurve.n();

    if (pref_sq < 0.0) {
        if (kind == CurveKind::unit_circle)
            pref_sq = prefactor_squared(Problem::QEUE, dcurve);
        else if (kind == CurveKind::real_segment)
            pref_sq = prefactor_squared(Problem::QERE, dcurve);
        else
            throw UnsupportedCurve("custom curves need an explicit prefactor");
    }

    MassSums ms;

    // closed-form integrals of the density (available for the two built-ins)
    if (kind == CurveKind::unit_circle) {
        ms.window_integral = window_integral_circle(delta, w.epsilon);
        ms.full_integral = 1.0;
    } else if (kind == CurveKind::real_segment) {
        const double rho = dcurve.curve().rho();
        ms.window_integral = window_integral_segment(rho, delta, lambda.real(),
                                                     w.center_t - w.epsilon, w.center_t + w.epsilon);
        ms.full_integral = window_integral_segment(rho, delta, lambda.real(), 0.0, 1.0);
    }

    if (dcurve.materialized()) {
        const DirectMass dm = direct_mass_sums(dcurve.points(), lambda, w);
        ms.window_mass = pref_sq * dm.window_sum;
        ms.full_mass = pref_sq * dm.full_sum;
        ms.tail_mass = std::max(0.0, ms.full_mass - ms.window_mass);
        ms.path = MassSums::Path::direct_full;
        return ms;
    }

    if (kind == CurveKind::real_segment) {
        // digamma partial sums are exact at any grid size
        const double rho = dcurve.curve().rho();
        const double h = 2.0 * rho / static_cast<double>(n);
        const double x0 = -rho;
        const double full = segment_grid_inverse_square_sum(x0, h, lambda.real(), delta, 0,
                                                            static_cast<std::int64_t>(n) - 1);
        const std::int64_t lo = std::max<std::int64_t>(0, w.first);
        const std::int64_t hi = std::min<std::int64_t>(static_cast<std::int64_t>(n) - 1, w.last);
        const double win = segment_grid_inverse_square_sum(x0, h, lambda.real(), delta, lo, hi);
        ms.window_mass = pref_sq * win;
        ms.full_mass = pref_sq * full;
        ms.tail_mass = std::max(0.0, ms.full_mass - ms.window_mass);
        ms.path = MassSums::Path::window_exact;
        return ms;
    }

    if (kind == CurveKind::unit_circle && !w.empty() && w.count() <= (std::uint64_t(1) << 27)) {
        double t_lambda = std::atan2(lambda.imag(), lambda.real()) / two_pi;
        if (t_lambda < 0.0) t_lambda += 1.0;
        const double full_raw = circle_grid_inverse_square_sum(1.0 + delta, lambda, n);
        std::int64_t first = w.first, last = w.last;
        if (w.covers_all()) {
            first = 0;
            last = static_cast<std::int64_t>(n) - 1;
        }
        const double win_raw = circle_window_sum(n, delta, lambda, t_lambda, first, last);
        ms.window_mass = pref_sq * win_raw;
        ms.full_mass = pref_sq * full_raw;
        ms.tail_mass = std::max(0.0, ms.full_mass - ms.window_mass);
        ms.path = MassSums::Path::window_exact;
        return ms;
    }

    // Integral path: exact summation is out of reach; report the closed-form
    // integrals with the lemma's discretization half-width.
    ms.interval_halfwidth = discretization_bound(dcurve);
    ms.window_mass = ms.window_integral;
    ms.full_mass = ms.full_integral;
    ms.tail_mass = std::max(0.0, ms.full_mass - ms.window_mass);
    ms.path = MassSums::Path::integral_interval;
    return ms;
}

std::vector<double> resolvent_marginal(const ComplexMatrix& a, const DiscretizedCurve& dcurve,
                                       const ComplexVector& psi) {
    if (!dcurve.materialized()) throw InfeasibleGrid("resolvent_marginal needs a materialized grid");
    const std::uint64_t n = dcurve.n();
    const std::size_t dim = a.dim();
    std::vector<double> mass(n, 0.0);
    parallel_for(n, [&](std::uint64_t j) {
        const Complex z = dcurve.z(j);
        ComplexMatrix m(dim);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c2 = 0; c2 < dim; ++c2) m.at(r, c2) = -a.at(r, c2);
            m.at(r, r) += z;
        }
        ComplexVector x;
        try {
            x = solve(m, psi);
        } catch (const SingularMatrix&) {
            throw SpectrumOnContour();
        }
        double s = 0.0;
        for (std::size_t r = 0; r < dim; ++r) s += std::norm(x[r]);
        mass[j] = s;
    }, 16);
    double total = 0.0;
    for (double v : mass) total += v;
    if (total > 0.0)
        for (double& v : mass) v /= total;
    return mass;
}

Complex full_cross_sum(const DiscretizedCurve& dcurve, Complex lambda_l, Complex lambda_m) {
    const CurveKind kind = dcurve.curve().kind();
    const std::uint64_t n = dcurve.n();
    const double nd = static_cast<double>(n);

    if (dcurve.materialized()) {
        struct CAcc {
            double re = 0.0, im = 0.0;
        };
        const auto& pts = dcurve.points();
        const CAcc acc = chunked_reduce<CAcc>(
            n, CAcc{},
            [&](std::uint64_t b, std::uint64_t e) {
                CAcc a;
                for (std::uint64_t j = b; j < e; ++j) {
                    const Complex v = std::conj(1.0 / (pts[j] - lambda_l)) / (pts[j] - lambda_m);
                    a.re += v.real();
                    a.im += v.imag();
                }
                return a;
            },
            [](CAcc a, CAcc b2) { return CAcc{a.re + b2.re, a.im + b2.im}; });
        return {acc.re, acc.im};
    }

    if (kind == CurveKind::unit_circle) {
        const double c = 1.0 + dcurve.delta();
        // sum_j z_j / ((c^2 - conj(l) z_j)(z_j - m)) with z-bar = c^2/z on the circle
        const Complex lc = std::conj(lambda_l);
        const Complex denom = c * c - lc * lambda_m;
        const Complex a_coef = (c * c) / denom;
        const Complex b_coef = lambda_m / denom;

        // geometric part: sum_j 1/(c^2 - conj(l) z_j) = (1/c^2) sum_j 1/(1 - s w^j), s = conj(l)/c
        Complex geo;
        const double abs_l = std::abs(lambda_l);
        if (abs_l == 0.0) {
            geo = Complex{nd / (c * c), 0.0};
        } else if (abs_l < c) {
            const Complex s = lc / c;
            geo = (nd / (c * c)) / (-complex_expm1(nd * std::log(s)));
        } else {
            const Complex sinv = c / lc;
            const Complex sn = std::exp(nd * std::log(sinv));
            geo = -(nd / (c * c)) * sn / (-complex_expm1(nd * std::log(sinv)));
        }

        // pole part: sum_j 1/(z_j - m)
        Complex invsum;
        const double abs_m = std::abs(lambda_m);
        if (abs_m == 0.0) {
            invsum = Complex{0.0, 0.0};
        } else if (abs_m < c) {
            const Complex q = lambda_m / c;
            const Complex qn1 = std::exp((nd - 1.0) * std::log(q));
            invsum = (nd / c) * qn1 / (-complex_expm1(nd * std::log(q)));
        } else {
            const Complex p = c / lambda_m;
            invsum = -(nd / lambda_m) / (-complex_expm1(nd * std::log(p)));
        }
        return a_coef * geo + b_coef * invsum;
    }

    if (kind == CurveKind::real_segment) {
        const double rho = dcurve.curve().rho();
        const double delta = dcurve.delta();
        const double h = 2.0 * rho / nd;
        const Complex a = lambda_l + Complex{0.0, delta};  // conj(z - l) = x - (l + i d)
        const Complex b = lambda_m - Complex{0.0, delta};
        const Complex wa = (Complex{-rho, 0.0} - a) / h;
        const Complex wb = (Complex{-rho, 0.0} - b) / h;
        const Complex sum_a = reciprocal_progression_sum(wa, 0, static_cast<std::int64_t>(n) - 1) / h;
        const Complex sum_b = reciprocal_progression_sum(wb, 0, static_cast<std::int64_t>(n) - 1) / h;
        return (sum_a - sum_b) / (a - b);
    }

    throw UnsupportedCurve("full_cross_sum needs a materialized grid for custom curves");
}

} // namespace resolvex
