#include "resolvex/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "resolvex/rng.hpp"

namespace resolvex {

namespace {

constexpr double pi = 3.141592653589793238462643;
constexpr double two_pi = 2.0 * pi;

double modular_dist(double a, double b) {
    double d = std::fmod(std::abs(a - b), 1.0);
    return std::min(d, 1.0 - d);
}

} // namespace

double EstimationConfig::grid_lower_bound() const {
    if (problem == Problem::QEUE)
        return (3.0 * std::sqrt(2.0) * pi + 6.0) * eps_eig / (delta * delta * delta);
    return 5.0 * rho() * eps_eig / (pi * delta * delta * delta);
}

double EstimationConfig::window_halfwidth_t() const {
    if (problem == Problem::QEUE) return eps_eig / two_pi;
    return eps_eig / (2.0 * rho());
}

double EstimationConfig::problem_header_halfwidth_t() const {
    if (problem == Problem::QEUE) return eps_eig / two_pi;
    return eps_eig / rho();
}

EstimationConfig select_parameters(Problem p, double eps_eig, double eps_st, double kappa_S,
                                   double alpha_A, ParameterMode mode,
                                   std::optional<double> user_delta, std::optional<int> user_a) {
    if (!(eps_eig > 0.0) || !(eps_st > 0.0) || eps_st >= 1.0)
        throw ConfigError("need eps_eig > 0 and eps_st in (0,1)");
    if (!(kappa_S >= 1.0)) throw ConfigError("kappa_S must be >= 1");
    if (!(alpha_A > 0.0)) throw ConfigError("alpha_A must be positive");

    EstimationConfig cfg;
    cfg.problem = p;
    cfg.eps_eig = eps_eig;
    cfg.eps_st = eps_st;
    cfg.kappa_S = kappa_S;
    cfg.alpha_A = alpha_A;
    cfg.mode = mode;

    const double k2 = kappa_S * kappa_S;
    const double strict_cap = std::min(eps_st * eps_eig / (32.0 * std::sqrt(5.0) * k2),
                                       eps_st * eps_st * eps_eig / (512.0 * (1.0 + 1.0 / pi) * k2 * k2));
    const double feasible_cap = eps_eig / 4.0;

    if (user_delta) {
        if (!(*user_delta > 0.0)) throw ConfigError("delta must be positive");
        cfg.delta = *user_delta;
        cfg.delta_user_set = true;
        if (mode == ParameterMode::strict_theorem && cfg.delta > strict_cap * (1.0 + 1e-12))
            throw ConfigError("user delta exceeds the strict-theorem cap");
        if (mode == ParameterMode::feasible && cfg.delta > feasible_cap * (1.0 + 1e-12))
            throw ConfigError("user delta exceeds eps_eig/4");
    } else {
        cfg.delta = mode == ParameterMode::strict_theorem ? strict_cap : feasible_cap;
    }

    const double required = cfg.grid_lower_bound();
    int a_min = 1;
    if (required > 2.0) {
        const double la = std::log2(required);
        a_min = static_cast<int>(std::ceil(la - 1e-12));
        if (a_min < 1) a_min = 1;
    }
    if (a_min > 63)
        throw InfeasibleGrid("grid bound needs 2^a > 2^63 (a = " + std::to_string(a_min) + ")");

    if (user_a) {
        if (*user_a < 1 || *user_a > 63) throw ConfigError("a must be in [1,63]");
        cfg.a = *user_a;
        cfg.a_user_set = true;
    } else {
        cfg.a = a_min;
    }

    const double n = std::pow(2.0, cfg.a);
    cfg.lemma_hypotheses_met = cfg.delta <= eps_eig / 4.0 * (1.0 + 1e-12) && n >= required * (1.0 - 1e-12);
    cfg.direct_feasible = cfg.a <= 26;
    cfg.theta_ratio = cfg.delta * k2 * k2 / (eps_eig * eps_st * eps_st);
    return cfg;
}

WindowProjector window_for(const EstimationConfig& cfg, const DiscretizedCurve& dcurve,
                           Complex lambda) {
    const double center = curve_parameter(dcurve.curve(), lambda);
    return window(center, cfg.window_halfwidth_t(), dcurve.a(), dcurve.curve().closed());
}

namespace {

const char* path_name(MassSums::Path p) {
    switch (p) {
        case MassSums::Path::direct_full: return "direct";
        case MassSums::Path::window_exact: return "window_exact";
        case MassSums::Path::integral_interval: return "integral_interval";
    }
    return "?";
}

// window-restricted cross sum sum_{j in W} conj(r_l(j)) r_m(j), prefactor excluded
Complex window_cross_sum(const ResolventState& rs, const WindowProjector& w, std::size_t l,
                         std::size_t m, const WindowProjector* also_in = nullptr) {
    Complex s{0.0, 0.0};
    for (std::uint64_t j : w.indices()) {
        if (also_in && !also_in->contains(j)) continue;
        s += std::conj(rs.raw_amplitude(l, j)) * rs.raw_amplitude(m, j);
    }
    return s;
}

void compute_aggregates(SuccessReport& rep, const ResolventState& rs,
                        const std::vector<WindowProjector>& wins) {
    const std::size_t s = rs.components.size();
    // Window enumeration has to be affordable.
    std::uint64_t total = 0;
    for (const auto& w : wins) total += w.count();
    if (total > (std::uint64_t(1) << 22) || !rs.dcurve.materialized()) return;

    const double pref_sq = rs.prefactor * rs.prefactor;
    std::vector<double> ratio(s);  // a0/a_l, real
    for (std::size_t l = 0; l < s; ++l) {
        if (rep.eigs[l].a_l <= 0.0) return;
        ratio[l] = rep.eigs[0].a_l / rep.eigs[l].a_l;
    }

    double psi1_sq = 0.0, psi2_sq = 0.0, psi3_sq = 0.0;
    for (std::size_t l = 0; l < s; ++l) {
        for (std::size_t m = 0; m < s; ++m) {
            const Complex bb = std::conj(rs.components[l].beta) * rs.components[m].beta;
            const Complex gram = inner(rs.eigvecs[l], rs.eigvecs[m]);
            const Complex c_pp = pref_sq * window_cross_sum(rs, wins[l], l, m, &wins[m]);
            const Complex c_wl = pref_sq * window_cross_sum(rs, wins[l], l, m);
            const Complex c_wm = pref_sq * window_cross_sum(rs, wins[m], l, m);
            const Complex c_ff = pref_sq * full_cross_sum(rs.dcurve, rs.components[l].lambda,
                                                          rs.components[m].lambda);
            const Complex c_qq = c_ff - c_wl - c_wm + c_pp;
            psi1_sq += (bb * gram * (ratio[l] * ratio[m] * c_pp)).real();
            psi2_sq += (bb * gram * ((1.0 - ratio[l]) * (1.0 - ratio[m]) * c_pp)).real();
            psi3_sq += (bb * gram * c_qq).real();
        }
    }
    rep.psi1_norm = std::sqrt(std::max(0.0, psi1_sq));
    rep.psi2_norm = std::sqrt(std::max(0.0, psi2_sq));
    rep.psi3_norm = std::sqrt(std::max(0.0, psi3_sq));
    const double total_sq = rs.norm * rs.norm;
    rep.total_failure_mass = total_sq > 0.0 ? std::max(0.0, psi3_sq) / total_sq : 0.0;
    rep.aggregates_computed = true;
}

} // namespace

SuccessReport measure_masses(const ResolventState& rs, const EstimationConfig& cfg,
                             const GeneratedMatrix& gm, bool with_aggregates) {
    if (rs.dcurve.a() != cfg.a || std::abs(rs.dcurve.delta() - cfg.delta) > 1e-15 * std::max(1.0, cfg.delta))
        throw BadSpec("success_masses: config inconsistent with the state's grid");
    (void)gm;

    SuccessReport rep;
    rep.ratio_bound = 4.0 * cfg.delta / cfg.eps_eig;
    rep.b_bound = std::sqrt(2.0 * (1.0 + 1.0 / pi) * cfg.delta / cfg.eps_eig);
    rep.hypotheses_met = cfg.lemma_hypotheses_met;

    std::vector<WindowProjector> wins;
    for (std::size_t l = 0; l < rs.components.size(); ++l) {
        const Complex lambda = rs.components[l].lambda;
        const WindowProjector w = window_for(cfg, rs.dcurve, lambda);
        wins.push_back(w);
        const MassSums ms = eig_mass_sums(rs.dcurve, lambda, w);
        EigMassReport e;
        e.lambda = lambda;
        e.a_sq = ms.window_mass;
        e.b_sq = ms.tail_mass;
        e.full_sq = ms.full_mass;
        e.a_l = std::sqrt(std::max(0.0, ms.window_mass));
        e.b_l = std::sqrt(std::max(0.0, ms.tail_mass));
        e.window_integral = ms.window_integral;
        e.full_integral = ms.full_integral;
        e.interval_halfwidth = ms.interval_halfwidth;
        e.path = path_name(ms.path);
        rep.eigs.push_back(std::move(e));
    }
    bool ok = true;
    for (auto& e : rep.eigs) {
        e.ratio_dev = e.a_l > 0.0 ? std::abs(1.0 - rep.eigs[0].a_l / e.a_l) : 1.0;
        if (e.a_l < rep.a_bound_lo || e.a_l > rep.a_bound_hi) ok = false;
        if (e.ratio_dev > rep.ratio_bound) ok = false;
        if (e.b_l > rep.b_bound) ok = false;
    }
    rep.bounds_hold = ok;

    if (with_aggregates) compute_aggregates(rep, rs, wins);
    return rep;
}

SuccessReport success_masses(const ResolventState& rs, const EstimationConfig& cfg,
                             const GeneratedMatrix& gm) {
    if (cfg.delta > cfg.eps_eig / 4.0 * (1.0 + 1e-12))
        throw HypothesisViolated("delta exceeds eps_eig/4");
    if (std::pow(2.0, cfg.a) < cfg.grid_lower_bound() * (1.0 - 1e-12))
        throw HypothesisViolated("2^a below the lemma grid bound");
    return measure_masses(rs, cfg, gm, true);
}

EstimationReport readout(const ResolventState& rs, const EstimationConfig& cfg,
                         const GeneratedMatrix& gm, std::uint64_t n_samples,
                         std::uint64_t rng_seed) {
    if (!rs.materialized())
        throw InfeasibleGrid("readout needs a materialized joint state; use the analytic reports instead");

    EstimationReport rep;
    rep.config = cfg;
    rep.n_samples = n_samples;
    rep.rng_seed = rng_seed;
    rep.success = measure_masses(rs, cfg, gm, false);

    const std::uint64_t n = rs.n();
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (std::uint64_t j = 0; j < n; ++j) {
        acc += rs.block_mass(j);
        cdf[j] = acc;
    }
    const double total = acc;

    std::vector<WindowProjector> wins;
    std::vector<double> t_lambda;
    for (const auto& comp : rs.components) {
        wins.push_back(window_for(cfg, rs.dcurve, comp.lambda));
        t_lambda.push_back(curve_parameter(rs.dcurve.curve(), comp.lambda));
    }
    const auto duals = dual_basis(rs.eigvecs);

    CounterRng rng(rng_seed);
    std::uint64_t failures = 0;
    std::map<std::pair<std::size_t, std::uint64_t>, std::uint64_t> hist;
    const double nd = static_cast<double>(n);

    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const double u = rng.uniform(i) * total;
        const std::uint64_t j = static_cast<std::uint64_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        const std::uint64_t jj = j < n ? j : n - 1;

        // oblique attribution through the dual basis of S
        const ComplexVector block = rs.system_block(jj);
        std::size_t best_l = 0;
        double best_mag = -1.0;
        for (std::size_t l = 0; l < duals.size(); ++l) {
            const double mag = std::abs(inner(duals[l], block));
            if (mag > best_mag * (1.0 + 1e-12)) {
                best_mag = mag;
                best_l = l;
            }
        }

        ReadoutSample smp;
        smp.j = jj;
        smp.t = static_cast<double>(jj) / nd;
        smp.attributed = best_l;
        smp.in_window = wins[best_l].contains(jj);
        if (cfg.problem == Problem::QEUE) {
            smp.estimate = two_pi * smp.t;
            smp.param_error = modular_dist(smp.t, t_lambda[best_l]);
        } else {
            smp.estimate = rs.dcurve.curve().rho() * (2.0 * smp.t - 1.0);
            smp.param_error = std::abs(smp.t - t_lambda[best_l]);
        }
        if (!smp.in_window) ++failures;
        ++hist[{best_l, jj}];
        if (rep.samples.size() < EstimationReport::sample_keep_cap) rep.samples.push_back(smp);
    }
    rep.empirical_failure_rate = n_samples ? static_cast<double>(failures) / static_cast<double>(n_samples) : 0.0;

    std::map<std::size_t, ModalEstimate> modal;
    for (const auto& [key, hits] : hist) {
        auto& m = modal[key.first];
        if (hits > m.hits) {
            m.component = key.first;
            m.j = key.second;
            m.hits = hits;
            m.t = static_cast<double>(key.second) / nd;
            m.estimate = cfg.problem == Problem::QEUE ? two_pi * m.t
                                                      : rs.dcurve.curve().rho() * (2.0 * m.t - 1.0);
        }
    }
    for (const auto& kv : modal) rep.modal.push_back(kv.second);
    return rep;
}

StateErrorCertificate state_error_certificate(const ResolventState& rs,
                                              const EstimationConfig& cfg,
                                              const GeneratedMatrix& gm) {
    StateErrorCertificate cert;
    cert.strict_ratio_bound = cfg.eps_st / 8.0;

    SuccessReport rep = measure_masses(rs, cfg, gm, true);
    const double kappa = cfg.kappa_S;

    if (rep.aggregates_computed) {
        cert.exact_path = true;
        cert.psi1_norm = rep.psi1_norm;
        cert.psi2_norm = rep.psi2_norm;
        cert.psi3_norm = rep.psi3_norm;
        const double a0 = rep.eigs[0].a_l;
        cert.psi1_lower = a0 / kappa;
        double max2 = 0.0, max3 = 0.0;
        for (const auto& e : rep.eigs) {
            max2 = std::max(max2, e.ratio_dev * e.a_l);
            max3 = std::max(max3, e.b_l);
        }
        cert.psi2_upper = kappa * max2;
        cert.psi3_upper = kappa * max3;
        const double tol = 1.0 + 1e-9;
        if (cert.psi1_norm * tol < cert.psi1_lower)
            throw CertificateFailed("||psi_1|| >= a_0/kappa_S violated");
        if (cert.psi2_norm > cert.psi2_upper * tol + 1e-15)
            throw CertificateFailed("||psi_2|| <= kappa_S max|1-a0/a_l| a_l violated");
        if (cert.psi3_norm > cert.psi3_upper * tol + 1e-15)
            throw CertificateFailed("||psi_3|| <= kappa_S max b_l violated");
        cert.ratio2 = cert.psi1_norm > 0.0 ? cert.psi2_norm / cert.psi1_norm : 0.0;
        cert.ratio3 = cert.psi1_norm > 0.0 ? cert.psi3_norm / cert.psi1_norm : 0.0;
    } else {
        // integral regime: certify through the lemma-constant chain
        cert.exact_path = false;
        if (!cfg.lemma_hypotheses_met)
            throw CertificateFailed("analytic certificate needs the lemma hypotheses");
        cert.ratio2 = 4.0 * std::sqrt(5.0) * cfg.delta * kappa * kappa / cfg.eps_eig;
        cert.ratio3 = kappa * kappa * std::sqrt(8.0 * (1.0 + 1.0 / pi) * cfg.delta / cfg.eps_eig);
    }

    if (cfg.mode == ParameterMode::strict_theorem) {
        if (cert.ratio2 > cert.strict_ratio_bound * (1.0 + 1e-9))
            throw CertificateFailed("||psi_2||/||psi_1|| <= eps_st/8 violated");
        if (cert.ratio3 > cert.strict_ratio_bound * (1.0 + 1e-9))
            throw CertificateFailed("||psi_3||/||psi_1|| <= eps_st/8 violated");
    }
    cert.normalized_distance_bound = 2.0 * (cert.ratio2 + cert.ratio3);
    return cert;
}

double baseline_expectation(const GeneratedMatrix& gm, std::size_t lambda_index,
                            double state_error, std::uint64_t seed) {
    const auto cols = gm.eigvec_columns(Problem::QERE);
    if (lambda_index >= cols.size()) throw BadSpec("baseline_expectation: index out of range");
    const std::size_t dim = gm.dim();
    ComplexVector psi = cols[lambda_index];

    if (state_error > 0.0) {
        SequentialRng rng(seed);
        ComplexVector u(dim);
        for (std::size_t r = 0; r < dim; ++r) u[r] = Complex{rng.gaussian(), rng.gaussian()};
        const Complex overlap = inner(psi, u);
        for (std::size_t r = 0; r < dim; ++r) u[r] -= overlap * psi[r];  // orthogonal worst case
        const double un = u.norm();
        if (un > 0.0)
            for (std::size_t r = 0; r < dim; ++r) psi[r] += (state_error / un) * u[r];
        const double pn = psi.norm();
        for (std::size_t r = 0; r < dim; ++r) psi[r] /= pn;
    }

    const ComplexVector av = gm.A * psi;
    return inner(psi, av).real();
}

double cost_score(const EstimationConfig& cfg, double alpha_A, double kreiss_value,
                  double kappa_S) {
    const double k4 = kappa_S * kappa_S * kappa_S * kappa_S;
    return alpha_A * k4 * kreiss_value / (cfg.eps_eig * cfg.eps_st * cfg.eps_st) *
           std::log(1.0 / cfg.eps_st);
}

} // namespace resolvex
