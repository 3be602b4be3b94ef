#include "resolvex/paramcurve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "resolvex/rng.hpp"

namespace resolvex {

namespace {

constexpr double pi = 3.141592653589793238462643;
constexpr double two_pi = 2.0 * pi;

double probe_max_speed(const Curve& c) {
    const int n = 8192;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / n;
        const double h = 1.0 / (2.0 * n);
        const Complex d = c.point(std::min(1.0, t + h)) - c.point(std::max(0.0, t - h));
        best = std::max(best, std::abs(d) / (2.0 * h));
    }
    return best;
}

// Adaptive Simpson with relative tolerance; throws QuadratureFailure on
// non-convergence (the §5 kernel blows up near intersecting families).
struct Quad {
    const std::function<double(double)>& f;
    double rel_tol;
    int max_depth;

    double simpson(double a, double b, double fa, double fm, double fb) const {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }
    double run(double a, double b) const {
        const double m = 0.5 * (a + b);
        const double fa = f(a), fm = f(m), fb = f(b);
        return step(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), 0);
    }
    double step(double a, double b, double fa, double fm, double fb, double whole,
                int depth) const {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = simpson(a, m, fa, flm, fm);
        const double right = simpson(m, b, fm, frm, fb);
        const double err = left + right - whole;
        if (std::abs(err) <= 15.0 * rel_tol * std::abs(left + right) || (b - a) < 1e-14)
            return left + right + err / 15.0;
        if (depth >= max_depth)
            throw QuadratureFailure("adaptive quadrature did not converge (near-intersecting family?)");
        return step(a, m, fa, flm, fm, left, depth + 1) +
               step(m, b, fm, frm, fb, right, depth + 1);
    }
};

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-6) {
    if (b <= a) return 0.0;
    Quad q{f, rel_tol, 36};
    return q.run(a, b);
}

// |gamma(t) - gamma_delta(t')|^{-2}, t' taken mod 1 for closed curves
double kernel(const CurveFamily& fam, double t, double tp, double delta) {
    double u = tp;
    if (fam.base.closed()) {
        u = std::fmod(u, 1.0);
        if (u < 0.0) u += 1.0;
    } else {
        u = std::min(1.0, std::max(0.0, u));
    }
    const Complex d = fam.base.point(t) - fam.base.shifted_point(u, delta);
    return 1.0 / std::norm(d);
}

struct Fit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    Fit f;
    const double den = n * sxx - sx * sx;
    f.slope = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = f.slope * x[i] + f.intercept;
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

} // namespace

double CurveFamily::prefactor_sq(double delta, std::uint64_t n_points) const {
    const double nd = static_cast<double>(n_points);
    if (base.kind() == CurveKind::unit_circle) return delta * (2.0 + delta) / nd;
    if (base.kind() == CurveKind::real_segment) return 2.0 * base.rho() * delta / (pi * nd);
    // 1/(N c_delta) with c_delta the full window integral at a reference point
    const double t_ref = interior_only ? 0.5 : 0.0;
    auto f = [&](double tp) { return kernel(*this, t_ref, tp, delta); };
    const double c_delta = integrate(f, 0.0, 1.0);
    return 1.0 / (nd * c_delta);
}

CurveFamily make_family(std::string name, Curve base, bool interior_only, double interior_margin) {
    CurveFamily fam;
    fam.name = std::move(name);
    fam.base = std::move(base);
    fam.max_speed = probe_max_speed(fam.base);
    fam.interior_only = interior_only;
    fam.interior_margin = interior_margin;
    return fam;
}

CurveFamily circle_family() {
    CurveFamily fam = make_family("circle", Curve::unit_circle());
    fam.max_speed = two_pi;
    fam.registered_prefactor = true;
    return fam;
}

CurveFamily segment_family(double rho) {
    CurveFamily fam = make_family("segment", Curve::real_segment(rho), true, 0.2);
    fam.max_speed = 2.0 * rho;
    fam.registered_prefactor = true;
    return fam;
}

CurveFamily ellipse_family(double ax, double by) {
    if (!(ax > 0.0) || !(by > 0.0)) throw BadSpec("ellipse needs positive semi-axes");
    auto angle_point = [ax, by](double u) {
        return Complex{ax * std::cos(two_pi * u), by * std::sin(two_pi * u)};
    };
    // Uniform-speed parametrization through an arc-length table: the window
    // integral of the kernel scales like 1/(delta |gamma'(t)|), so the naive
    // angle parametrization would make cond1's constant depend on t.
    const int table_n = 16384;
    auto arc = std::make_shared<std::vector<double>>(table_n + 1, 0.0);
    for (int i = 1; i <= table_n; ++i) {
        const double u0 = static_cast<double>(i - 1) / table_n;
        const double u1 = static_cast<double>(i) / table_n;
        (*arc)[i] = (*arc)[i - 1] + std::abs(angle_point(u1) - angle_point(u0));
    }
    const double total = arc->back();
    auto angle_of = [arc, total, table_n](double t) {
        double target = t - std::floor(t);
        target *= total;
        const auto it = std::lower_bound(arc->begin(), arc->end(), target);
        std::size_t hi_i = static_cast<std::size_t>(it - arc->begin());
        if (hi_i == 0) hi_i = 1;
        if (hi_i > static_cast<std::size_t>(table_n)) hi_i = table_n;
        const double s0 = (*arc)[hi_i - 1], s1 = (*arc)[hi_i];
        const double frac = s1 > s0 ? (target - s0) / (s1 - s0) : 0.0;
        return (static_cast<double>(hi_i - 1) + frac) / table_n;
    };
    auto gamma = [angle_point, angle_of](double t) { return angle_point(angle_of(t)); };
    auto shifted = [ax, by, angle_point, angle_of](double t, double delta) {
        // outward unit normal at the mapped angle
        const double u = angle_of(t);
        const double c = std::cos(two_pi * u), s = std::sin(two_pi * u);
        const double nn = std::sqrt(by * by * c * c + ax * ax * s * s);
        return angle_point(u) + delta * Complex{by * c / nn, ax * s / nn};
    };
    return make_family("ellipse", Curve::custom("ellipse", gamma, true, shifted));
}

CurveFamily family_by_name(const std::string& name, double rho, double ax, double by) {
    if (name == "circle") return circle_family();
    if (name == "segment") return segment_family(rho);
    if (name == "ellipse") return ellipse_family(ax, by);
    throw BadSpec("unknown curve family '" + name + "' (expected circle|segment|ellipse)");
}

ConformanceReport check_conditions(const CurveFamily& fam, const std::vector<double>& deltas,
                                   const std::vector<double>& epsilons, int t_probes) {
    if (deltas.empty() || epsilons.empty()) throw BadSpec("need nonempty delta/epsilon lists");
    for (double d : deltas)
        if (!(d > 0.0)) throw BadSpec("deltas must be positive");
    for (double e : epsilons)
        if (!(e > 0.0)) throw BadSpec("epsilons must be positive");
    if (t_probes < 16) throw BadSpec("t_probes must be at least 16");

    ConformanceReport rep;
    rep.family = fam.name;

    const double lo = fam.interior_only ? fam.interior_margin : 0.0;
    const double hi = fam.interior_only ? 1.0 - fam.interior_margin : 1.0;

    // cond1 + cond2 share the window integrals
    double dev1 = 0.0;
    std::vector<double> xs, ys;
    double max_ratio = 0.0;
    for (double delta : deltas) {
        for (double eps : epsilons) {
            std::vector<double> windows(t_probes), fulls(t_probes);
            for (int i = 0; i < t_probes; ++i) {
                const double t = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / t_probes;
                auto f = [&](double tp) { return kernel(fam, t, tp, delta); };
                double w_lo = t - eps, w_hi = t + eps;
                if (!fam.base.closed()) {
                    w_lo = std::max(0.0, w_lo);
                    w_hi = std::min(1.0, w_hi);
                }
                windows[i] = integrate(f, w_lo, w_hi);
                fulls[i] = integrate(f, 0.0, 1.0);
            }
            double mean = 0.0;
            for (double w : windows) mean += w;
            mean /= t_probes;
            double dev = 0.0, ratio_sum = 0.0;
            for (int i = 0; i < t_probes; ++i) {
                dev = std::max(dev, std::abs(windows[i] - mean) / mean);
                const double r = std::abs(1.0 - windows[i] / fulls[i]);
                ratio_sum += r;
                max_ratio = std::max(max_ratio, r);
            }
            dev1 = std::max(dev1, dev);
            xs.push_back(delta / eps);
            ys.push_back(ratio_sum / t_probes);
        }
    }
    rep.cond1_max_rel_deviation = dev1;
    rep.pass1 = dev1 <= rep.tol1;

    // cond2: fit ratio = C * (delta/eps) through the origin
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += xs[i] * ys[i];
        sxx += xs[i] * xs[i];
    }
    rep.cond2_constant = sxx > 0.0 ? sxy / sxx : 0.0;
    double ss_res = 0.0, ss_tot = 0.0, mean_y = 0.0;
    for (double y : ys) mean_y += y;
    mean_y /= ys.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ss_res += (ys[i] - rep.cond2_constant * xs[i]) * (ys[i] - rep.cond2_constant * xs[i]);
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    rep.cond2_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    rep.cond2_max_ratio = max_ratio;
    rep.pass2 = std::isfinite(rep.cond2_constant) && rep.cond2_r2 >= rep.r2_min;

    // cond3: finite-difference sup_{t'} |d/dt'| of the unit-mass density
    // (the kernel divided by its full integral, the analog of g_l / f_l),
    // log-log fitted against 1/delta
    std::vector<double> lx, ly;
    for (double delta : deltas) {
        double max_deriv = 0.0;
        const int grid = 4096;
        const int nt = std::min(8, t_probes);
        for (int k = 0; k < nt; ++k) {
            const double t = lo + (hi - lo) * (static_cast<double>(k) + 0.5) / nt;
            auto f = [&](double tp) { return kernel(fam, t, tp, delta); };
            const double mass = integrate(f, 0.0, 1.0);
            const double h = 1.0 / (4.0 * grid);
            for (int i = 0; i < grid; ++i) {
                const double tp = static_cast<double>(i) / grid;
                const double d = (kernel(fam, t, tp + h, delta) - kernel(fam, t, tp - h, delta)) / (2.0 * h);
                max_deriv = std::max(max_deriv, std::abs(d) / mass);
            }
        }
        lx.push_back(std::log(1.0 / delta));
        ly.push_back(std::log(max_deriv));
    }
    rep.cond3_exponent = linear_fit(lx, ly).slope;
    rep.pass3 = rep.cond3_exponent <= rep.exponent_max;
    return rep;
}

EstimationReport generalized_estimate(const CurveFamily& fam, const GeneratedMatrix& gm,
                                      const EstimationConfig& cfg,
                                      const std::vector<Complex>& betas,
                                      std::uint64_t n_samples, std::uint64_t seed,
                                      const ConformanceReport& conformance) {
    if (!conformance.passed())
        throw ConformanceRequired("curve family '" + fam.name + "' has not passed the conformance checks");

    // Built-in families are the proven specializations: identical grid, solves
    // and reports as the QEUE/QERE pipelines. The config is rebuilt around the
    // family so that window conventions and prefactors match the actual grid.
    if (fam.base.kind() == CurveKind::unit_circle || fam.base.kind() == CurveKind::real_segment) {
        const Problem p = fam.base.kind() == CurveKind::unit_circle ? Problem::QEUE : Problem::QERE;
        double alpha = cfg.alpha_A;
        if (p == Problem::QERE) {
            if (fam.base.rho() < gm.alpha + cfg.eps_eig - 1e-12)
                throw BadSpec("segment family is shorter than alpha_A + eps_eig");
            alpha = fam.base.rho() - cfg.eps_eig;  // cfg.rho() == family rho
        }
        const EstimationConfig routed = select_parameters(
            p, cfg.eps_eig, cfg.eps_st, cfg.kappa_S, alpha, cfg.mode,
            cfg.delta, cfg.a);
        const DiscretizedCurve dcurve = discretize(fam.base, routed.a, routed.delta);
        const ResolventSystem sys = build_system(gm, dcurve, p);
        const InputState st = input_state(gm, betas, p);
        ResolventOptions opts;
        opts.mode = SolveMode::direct;  // the generalized pipeline solves block by block
        const ResolventState rs = resolvent_state(sys, st.psi, opts);
        return readout(rs, routed, gm, n_samples, seed);
    }

    // generic path: direct solves, direct mass summation, no closed forms
    const DiscretizedCurve dcurve = discretize(fam.base, cfg.a, cfg.delta);
    if (!dcurve.materialized())
        throw InfeasibleGrid("generalized_estimate needs a materializable grid for custom curves");

    // on-curve blocks: eigenvalues within 1e-9 of the base curve
    std::vector<std::size_t> blocks;
    std::vector<double> t_lambda;
    for (std::size_t l = 0; l < gm.spec.blocks.size(); ++l) {
        const Complex lam = gm.spec.blocks[l].lambda;
        const double t = curve_parameter(fam.base, lam);
        if (std::abs(fam.base.point(t) - lam) <= 1e-9) {
            blocks.push_back(l);
            t_lambda.push_back(t);
        }
    }
    if (blocks.size() != betas.size())
        throw BadSpec("betas length must match the number of on-curve eigenvalues");
    if (blocks.empty()) throw BadSpec("no eigenvalue lies on the family's base curve");

    std::vector<ComplexVector> cols;
    for (std::size_t l : blocks) cols.push_back(gm.block_eigvecs[l]);
    ComplexVector psi(gm.dim());
    for (std::size_t i = 0; i < cols.size(); ++i)
        for (std::size_t r = 0; r < gm.dim(); ++r) psi[r] += betas[i] * cols[i][r];
    const double pn = psi.norm();
    if (pn < 1e-12) throw ZeroState();
    for (std::size_t r = 0; r < gm.dim(); ++r) psi[r] /= pn;

    const double eps_t = cfg.eps_eig / fam.max_speed;
    const double pref_sq = fam.prefactor_sq(cfg.delta, dcurve.n());

    EstimationReport rep;
    rep.config = cfg;
    rep.n_samples = n_samples;
    rep.rng_seed = seed;
    rep.note = "generalized family '" + fam.name + "', direct summation";

    rep.success.ratio_bound = 4.0 * cfg.delta / cfg.eps_eig;
    rep.success.b_bound = std::sqrt(2.0 * (1.0 + 1.0 / pi) * cfg.delta / cfg.eps_eig);
    rep.success.hypotheses_met = false;  // lemma constants are curve-specific

    std::vector<WindowProjector> wins;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const WindowProjector w = window(t_lambda[i], eps_t, cfg.a, fam.base.closed());
        wins.push_back(w);
        const DirectMass dm = direct_mass_sums(dcurve.points(), gm.spec.blocks[blocks[i]].lambda, w);
        EigMassReport e;
        e.lambda = gm.spec.blocks[blocks[i]].lambda;
        e.a_sq = pref_sq * dm.window_sum;
        e.full_sq = pref_sq * dm.full_sum;
        e.b_sq = std::max(0.0, e.full_sq - e.a_sq);
        e.a_l = std::sqrt(e.a_sq);
        e.b_l = std::sqrt(e.b_sq);
        e.path = "direct";
        rep.success.eigs.push_back(e);
    }
    for (auto& e : rep.success.eigs)
        e.ratio_dev = e.a_l > 0.0 ? std::abs(1.0 - rep.success.eigs[0].a_l / e.a_l) : 1.0;

    // sampling from the exact marginal; the dual-basis attribution reduces to
    // |beta_l (z_j - lambda_l)^{-1}| because psi lies in span(S)
    const std::vector<double> marginal = resolvent_marginal(gm.A, dcurve, psi);
    std::vector<double> cdf(marginal.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < marginal.size(); ++j) {
        acc += marginal[j];
        cdf[j] = acc;
    }
    CounterRng rng(seed);
    std::uint64_t failures = 0;
    std::map<std::pair<std::size_t, std::uint64_t>, std::uint64_t> hist;
    const double nd = static_cast<double>(dcurve.n());
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const double u = rng.uniform(i) * acc;
        std::uint64_t j = static_cast<std::uint64_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (j >= dcurve.n()) j = dcurve.n() - 1;
        std::size_t best_l = 0;
        double best_mag = -1.0;
        for (std::size_t l = 0; l < blocks.size(); ++l) {
            const double mag =
                std::abs(betas[l] / (dcurve.z(j) - gm.spec.blocks[blocks[l]].lambda));
            if (mag > best_mag * (1.0 + 1e-12)) {
                best_mag = mag;
                best_l = l;
            }
        }
        if (!wins[best_l].contains(j)) ++failures;
        ++hist[{best_l, j}];
    }
    rep.empirical_failure_rate =
        n_samples ? static_cast<double>(failures) / static_cast<double>(n_samples) : 0.0;
    std::map<std::size_t, ModalEstimate> modal;
    for (const auto& [key, hits] : hist) {
        auto& m = modal[key.first];
        if (hits > m.hits) {
            m.component = key.first;
            m.j = key.second;
            m.hits = hits;
            m.t = static_cast<double>(key.second) / nd;
            const Complex est = fam.base.point(m.t);
            m.estimate = fam.base.closed() ? std::arg(est) : est.real();
        }
    }
    for (const auto& kv : modal) rep.modal.push_back(kv.second);
    return rep;
}

RadialSweep radial_search(const GeneratedMatrix& gm, const ComplexVector& psi, double r_min,
                          double r_max, double k_delta, const EstimationConfig& cfg) {
    if (!(r_min > 0.0) || !(r_max >= r_min) || !(k_delta > 0.0))
        throw BadSpec("radial_search needs 0 < r_min <= r_max and k_delta > 0");

    RadialSweep sweep;
    const Curve circle = Curve::unit_circle();
    const double eps_t = cfg.eps_eig / two_pi;

    const long k_lo = static_cast<long>(std::ceil(r_min / k_delta - 1e-9));
    const long k_hi = static_cast<long>(std::floor(r_max / k_delta + 1e-9));
    for (long k = k_lo; k <= k_hi; ++k) {
        const double r = static_cast<double>(k) * k_delta;
        const GeneratedMatrix gm_r = gm.rescaled(r);
        const DiscretizedCurve dcurve = discretize(circle, cfg.a, cfg.delta);
        const std::vector<double> marginal = resolvent_marginal(gm_r.A, dcurve, psi);

        std::uint64_t peak = 0;
        for (std::uint64_t j = 1; j < marginal.size(); ++j)
            if (marginal[j] > marginal[peak]) peak = j;
        const double peak_t = static_cast<double>(peak) / static_cast<double>(dcurve.n());
        const WindowProjector w = window(peak_t, eps_t, cfg.a, true);
        double mass = 0.0;
        for (std::uint64_t j : w.indices()) mass += marginal[j];

        RadialEntry entry;
        entry.radius = r;
        entry.success_mass = mass;
        entry.peak_t = peak_t;
        entry.peak_arg = two_pi * peak_t;
        sweep.entries.push_back(entry);
    }
    for (std::size_t i = 1; i < sweep.entries.size(); ++i)
        if (sweep.entries[i].success_mass > sweep.entries[sweep.best].success_mass) sweep.best = i;
    return sweep;
}

} // namespace resolvex
