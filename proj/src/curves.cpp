#include "resolvex/curves.hpp"

#include <cmath>

namespace resolvex {

namespace {
constexpr double two_pi = 6.283185307179586476925287;
}

Curve Curve::unit_circle() {
    Curve c;
    c.kind_ = CurveKind::unit_circle;
    c.name_ = "unit_circle";
    c.closed_ = true;
    return c;
}

Curve Curve::real_segment(double rho) {
    if (!(rho > 0.0)) throw BadSpec("real_segment requires rho > 0");
    Curve c;
    c.kind_ = CurveKind::real_segment;
    c.name_ = "real_segment";
    c.closed_ = false;
    c.rho_ = rho;
    return c;
}

Curve Curve::custom(std::string name, std::function<Complex(double)> gamma, bool closed,
                    std::function<Complex(double, double)> shifted) {
    Curve c;
    c.kind_ = CurveKind::custom;
    c.name_ = std::move(name);
    c.closed_ = closed;
    c.gamma_ = std::move(gamma);
    c.shifted_ = std::move(shifted);
    // Parametrization must stay finite; probe the domain once at registration.
    const int probes = 10000;
    for (int i = 0; i <= probes; ++i) {
        Complex v = c.gamma_(static_cast<double>(i) / probes);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw BadSpec("custom curve returns non-finite values on probe grid");
    }
    if (c.closed_) {
        Complex d = c.gamma_(0.0) - c.gamma_(1.0);
        if (std::abs(d) > 1e-9) throw BadSpec("closed custom curve must satisfy gamma(0) = gamma(1)");
    }
    return c;
}

Complex Curve::point(double t) const {
    switch (kind_) {
        case CurveKind::unit_circle: return std::polar(1.0, two_pi * t);
        case CurveKind::real_segment: return Complex{rho_ * (2.0 * t - 1.0), 0.0};
        case CurveKind::custom: return gamma_(t);
    }
    return {};
}

Complex Curve::shifted_point(double t, double delta) const {
    switch (kind_) {
        case CurveKind::unit_circle: return (1.0 + delta) * std::polar(1.0, two_pi * t);
        case CurveKind::real_segment: return Complex{rho_ * (2.0 * t - 1.0), delta};
        case CurveKind::custom:
            if (!shifted_) throw UnsupportedCurve("custom curve '" + name_ + "' has no registered delta-shift family");
            return shifted_(t, delta);
    }
    return {};
}

bool Curve::has_shift_rule() const { return kind_ != CurveKind::custom || static_cast<bool>(shifted_); }

DiscretizedCurve::DiscretizedCurve(Curve curve, int a, double delta, bool materialize)
    : curve_(std::move(curve)), a_(a), delta_(delta) {
    if (a < 1 || a > 63) throw BadSpec("grid exponent a must be in [1,63]");
    if (delta < 0.0) throw BadSpec("delta must be nonnegative");
    if (!curve_.has_shift_rule()) throw UnsupportedCurve("custom curve '" + curve_.name() + "' has no registered delta-shift family");
    const std::uint64_t N = n();
    if (materialize && N <= materialize_cap) {
        points_.resize(N);
        const double inv_n = 1.0 / static_cast<double>(N);
        for (std::uint64_t j = 0; j < N; ++j)
            points_[j] = curve_.shifted_point(static_cast<double>(j) * inv_n, delta_);
    }
}

Complex DiscretizedCurve::z(std::uint64_t j) const {
    if (!points_.empty()) return points_[j];
    return curve_.shifted_point(static_cast<double>(j) / static_cast<double>(n()), delta_);
}

DiscretizedCurve discretize(const Curve& curve, int a, double delta) {
    return DiscretizedCurve(curve, a, delta);
}

bool WindowProjector::contains(std::uint64_t j) const {
    if (empty()) return false;
    if (covers_all()) return true;
    const std::int64_t N = std::int64_t(1) << a;
    const std::int64_t ji = static_cast<std::int64_t>(j);
    if (first >= 0 && last < N) return ji >= first && ji <= last;
    // wrapped interval
    return (ji >= first && ji <= last) || (ji + N >= first && ji + N <= last) ||
           (ji - N >= first && ji - N <= last);
}

std::vector<std::uint64_t> WindowProjector::indices() const {
    std::vector<std::uint64_t> out;
    if (empty()) return out;
    const std::int64_t N = std::int64_t(1) << a;
    const std::uint64_t cnt = std::min<std::uint64_t>(count(), static_cast<std::uint64_t>(N));
    out.reserve(cnt);
    for (std::uint64_t k = 0; k < cnt; ++k) {
        std::int64_t j = first + static_cast<std::int64_t>(k);
        j %= N;
        if (j < 0) j += N;
        out.push_back(static_cast<std::uint64_t>(j));
    }
    return out;
}

WindowProjector window(double center_t, double epsilon, int a, bool modular) {
    if (a < 1 || a > 63) throw BadSpec("grid exponent a must be in [1,63]");
    if (!(epsilon > 0.0)) throw BadSpec("window epsilon must be positive");
    if (center_t < 0.0 || center_t > 1.0) throw BadSpec("center_t must lie in [0,1]");
    WindowProjector w;
    w.center_t = center_t;
    w.epsilon = epsilon;
    w.a = a;
    w.modular = modular;
    const double N = static_cast<double>(std::uint64_t(1) << a);
    if (modular) {
        // contiguous in the unwrapped index; indices() reduces mod N
        w.first = static_cast<std::int64_t>(std::ceil(N * (center_t - epsilon)));
        w.last = static_cast<std::int64_t>(std::floor(N * (center_t + epsilon)));
        if (w.count() > w.n()) w.last = w.first + static_cast<std::int64_t>(w.n()) - 1;
    } else {
        w.first = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(N * (center_t - epsilon))));
        w.last = std::min<std::int64_t>(static_cast<std::int64_t>(N) - 1,
                                        static_cast<std::int64_t>(std::floor(N * (center_t + epsilon))));
    }
    return w;
}

Complex riemann_sum(const std::function<Complex(double)>& f, int a, double t_min, double t_max) {
    if (a < 1 || a > 30) throw BadSpec("riemann_sum grid exponent out of range");
    if (t_min < 0.0 || t_max > 1.0 || t_min > t_max) throw BadSpec("riemann_sum needs 0 <= t_min <= t_max <= 1");
    const double N = static_cast<double>(std::uint64_t(1) << a);
    const std::int64_t j0 = static_cast<std::int64_t>(std::ceil(N * t_min));
    const std::int64_t j1 = static_cast<std::int64_t>(std::floor(N * t_max));
    Complex s{0.0, 0.0};
    for (std::int64_t j = j0; j <= j1; ++j) s += f(static_cast<double>(j) / N);
    return s / N;
}

Complex periodic_sum(const std::function<Complex(double)>& f, int a) {
    if (a < 1 || a > 30) throw BadSpec("periodic_sum grid exponent out of range");
    const std::uint64_t N = std::uint64_t(1) << a;
    Complex s{0.0, 0.0};
    for (std::uint64_t j = 0; j < N; ++j) s += f(static_cast<double>(j) / static_cast<double>(N));
    return s / static_cast<double>(N);
}

double riemann_error_bound(double max_deriv, double max_abs, int a, double t_min, double t_max) {
    if (max_deriv < 0.0 || max_abs < 0.0) throw BadSpec("bounds must be nonnegative");
    const double N = static_cast<double>(std::uint64_t(1) << a);
    const double w = t_max - t_min;
    return (0.5 * w * w * max_deriv + 2.0 * max_abs) / N;
}

double curve_parameter(const Curve& curve, Complex lambda) {
    if (curve.kind() == CurveKind::unit_circle) {
        double t = std::atan2(lambda.imag(), lambda.real()) / two_pi;
        if (t < 0.0) t += 1.0;
        return t;
    }
    if (curve.kind() == CurveKind::real_segment) {
        const double t = (lambda.real() / curve.rho() + 1.0) / 2.0;
        return std::min(1.0, std::max(0.0, t));
    }
    // coarse scan, then ternary refinement of |gamma(t) - lambda|
    const int probes = 4096;
    double best_t = 0.0, best_d = std::abs(curve.point(0.0) - lambda);
    for (int i = 1; i <= probes; ++i) {
        const double t = static_cast<double>(i) / probes;
        const double d = std::abs(curve.point(t) - lambda);
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
    }
    double lo = std::max(0.0, best_t - 1.0 / probes);
    double hi = std::min(1.0, best_t + 1.0 / probes);
    for (int it = 0; it < 80; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (std::abs(curve.point(m1) - lambda) < std::abs(curve.point(m2) - lambda))
            hi = m2;
        else
            lo = m1;
    }
    return 0.5 * (lo + hi);
}

} // namespace resolvex
