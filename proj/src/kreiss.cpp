#include "resolvex/kreiss.hpp"

#include <cmath>
#include <functional>

#include "resolvex/parallel.hpp"

namespace resolvex {

namespace {

constexpr double two_pi = 6.283185307179586476925287;

struct Peak {
    double norm = -1.0;
    double s = 0.0;  // contour parameter in [0,1)
};

Peak raw_grid_max(const std::function<double(double)>& norm_at, long samples) {
    const double inv = 1.0 / static_cast<double>(samples);
    return chunked_reduce<Peak>(
        static_cast<std::uint64_t>(samples), Peak{},
        [&](std::uint64_t b, std::uint64_t e) {
            Peak p;
            for (std::uint64_t k = b; k < e; ++k) {
                const double s = static_cast<double>(k) * inv;
                const double v = norm_at(s);
                if (v > p.norm) p = {v, s};
            }
            return p;
        },
        [](Peak a, Peak b2) { return b2.norm > a.norm ? b2 : a; },
        256);
}

// Golden-section passes around the sampled arg max; each pass re-centers a
// shrunken bracket on the best point found so far.
Peak refine(const std::function<double(double)>& norm_at, Peak start, double bracket, int passes) {
    const double gr = 0.6180339887498948482;
    Peak best = start;
    double width = bracket;
    for (int pass = 0; pass < passes; ++pass) {
        double lo = best.s - width;
        double hi = best.s + width;
        double x1 = hi - gr * (hi - lo);
        double x2 = lo + gr * (hi - lo);
        double f1 = norm_at(x1);
        double f2 = norm_at(x2);
        for (int it = 0; it < 20; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = norm_at(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = norm_at(x1);
            }
            const Peak cand = f1 > f2 ? Peak{f1, x1} : Peak{f2, x2};
            if (cand.norm > best.norm) best = cand;
        }
        width = hi - lo;
    }
    return best;
}

} // namespace

double resolvent_norm(const ComplexMatrix& c, Complex z) {
    const std::size_t n = c.dim();
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) m.at(r, k) = (r == k ? z : Complex{0, 0}) - c.at(r, k);
    const auto sv = singular_values(m);
    const double smin = sv.back();
    const double scale = std::max(m.max_abs(), std::abs(z));
    if (smin < 1e-14 * scale) throw ContourHitsSpectrum();
    return 1.0 / smin;
}

KreissEstimate kreiss_circle(const ComplexMatrix& c, double delta, long samples) {
    if (!(delta > 0.0)) throw BadSpec("kreiss_circle requires delta > 0");
    const double radius = 1.0 + delta;
    if (samples <= 0)
        samples = std::max<long>(4096, static_cast<long>(std::ceil(8.0 * two_pi * radius / delta)));
    auto norm_at = [&](double s) { return resolvent_norm(c, std::polar(radius, two_pi * s)); };

    const Peak raw = raw_grid_max(norm_at, samples);
    const Peak peak = refine(norm_at, raw, 1.0 / static_cast<double>(samples), 3);

    KreissEstimate est;
    est.delta = delta;
    est.contour = ContourKind::circle;
    est.samples = samples;
    est.refinement_passes = 3;
    est.sampled_value = delta * raw.norm;
    est.value = delta * peak.norm;
    est.argmax_z = std::polar(radius, two_pi * peak.s);
    return est;
}

KreissEstimate kreiss_line(const ComplexMatrix& c, double delta, double y_range, long samples) {
    if (!(delta > 0.0)) throw BadSpec("kreiss_line requires delta > 0");
    if (y_range <= 0.0) y_range = 2.0 * (spectral_norm(c) + 1.0);
    if (samples <= 0)
        samples = std::max<long>(4096, static_cast<long>(std::ceil(16.0 * y_range / delta)));
    auto norm_at = [&](double s) {
        const double y = -y_range + 2.0 * y_range * s;
        return resolvent_norm(c, Complex{delta, y});
    };

    const Peak raw = raw_grid_max(norm_at, samples);
    const Peak peak = refine(norm_at, raw, 1.0 / static_cast<double>(samples), 3);

    KreissEstimate est;
    est.delta = delta;
    est.contour = ContourKind::vertical_line;
    est.samples = samples;
    est.refinement_passes = 3;
    est.sampled_value = delta * raw.norm;
    est.value = delta * peak.norm;
    est.argmax_z = Complex{delta, -y_range + 2.0 * y_range * peak.s};
    return est;
}

double jordan_kreiss_bound(double kappa_bar, int d, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw BadSpec("jordan_kreiss_bound requires 0 < delta < 1");
    if (d < 1) throw BadSpec("jordan_kreiss_bound requires d >= 1");
    if (!(kappa_bar >= 1.0)) throw BadSpec("jordan_kreiss_bound requires kappa_bar >= 1");
    return kappa_bar * std::pow(1.0 / delta, d - 1) * (1.0 - std::pow(delta, d)) / (1.0 - delta);
}

double resolvent_norm_bound(double kappa_bar, int d, double dist) {
    if (!(dist > 0.0 && dist < 1.0)) throw BadSpec("resolvent_norm_bound requires 0 < dist < 1");
    if (d < 1) throw BadSpec("resolvent_norm_bound requires d >= 1");
    return kappa_bar * (1.0 - std::pow(dist, d)) / (std::pow(dist, d) * (1.0 - dist));
}

double transient_growth_probe(const ComplexMatrix& c, double t_max, int samples) {
    if (!(t_max > 0.0) || samples < 1) throw BadSpec("transient_growth_probe needs t_max > 0, samples >= 1");
    double best = 1.0;  // t = 0 gives the identity
    for (int k = 1; k <= samples; ++k) {
        const double t = t_max * static_cast<double>(k) / static_cast<double>(samples);
        best = std::max(best, spectral_norm(expm(c.scaled(t))));
    }
    return best;
}

} // namespace resolvex
