#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "resolvex/numkit.hpp"

namespace resolvex {

enum class CurveKind { unit_circle, real_segment, custom };

// A curve gamma:[0,1] -> C. The two built-in kinds carry their canonical
// delta-shift families (outward circle scaling, +i*delta segment shift);
// custom curves must be registered with an explicit shift rule before they
// can be discretized.
class Curve {
public:
    Curve() = default;  // unit circle
    static Curve unit_circle();
    static Curve real_segment(double rho);
    static Curve custom(std::string name, std::function<Complex(double)> gamma, bool closed,
                        std::function<Complex(double, double)> shifted = nullptr);

    CurveKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    bool closed() const { return closed_; }
    double rho() const { return rho_; }

    Complex point(double t) const;
    // gamma_delta(t); throws UnsupportedCurve for custom curves lacking a shift rule.
    Complex shifted_point(double t, double delta) const;
    bool has_shift_rule() const;

private:
    CurveKind kind_ = CurveKind::unit_circle;
    std::string name_;
    bool closed_ = true;
    double rho_ = 1.0;  // real_segment half-length
    std::function<Complex(double)> gamma_;
    std::function<Complex(double, double)> shifted_;
};

// N = 2^a points z_j on the shifted curve gamma_delta, t_j = j/N.
// Points are materialized up to `materialize_cap` entries; beyond that z(j)
// is evaluated on demand so astronomically fine grids stay usable.
class DiscretizedCurve {
public:
    static constexpr std::uint64_t materialize_cap = std::uint64_t(1) << 22;

    DiscretizedCurve() = default;
    // materialize=false keeps even small grids on-demand (closed-form paths)
    DiscretizedCurve(Curve curve, int a, double delta, bool materialize = true);

    const Curve& curve() const { return curve_; }
    int a() const { return a_; }
    std::uint64_t n() const { return std::uint64_t(1) << a_; }
    double delta() const { return delta_; }
    bool materialized() const { return !points_.empty(); }
    const std::vector<Complex>& points() const { return points_; }

    Complex z(std::uint64_t j) const;

private:
    Curve curve_;
    int a_ = 1;
    double delta_ = 0.0;
    std::vector<Complex> points_;
};

DiscretizedCurve discretize(const Curve& curve, int a, double delta);

// Ancilla indices within epsilon of center_t: { j : |j/2^a - center_t| <= eps },
// distances taken mod 1 when modular. The set is a contiguous index interval
// [first, last] (wrapping for modular windows), kept in that form because the
// grids can be far too large to enumerate.
struct WindowProjector {
    double center_t = 0.0;
    double epsilon = 0.0;
    int a = 1;
    bool modular = false;
    std::int64_t first = 0;   // may be negative / exceed N-1 in modular form
    std::int64_t last = -1;   // empty when last < first

    std::uint64_t n() const { return std::uint64_t(1) << a; }
    bool empty() const { return last < first; }
    std::uint64_t count() const { return empty() ? 0 : std::uint64_t(last - first + 1); }
    bool covers_all() const { return count() >= n(); }
    bool contains(std::uint64_t j) const;
    std::vector<std::uint64_t> indices() const;  // enumerated mod N (small windows only)
};

WindowProjector window(double center_t, double epsilon, int a, bool modular);

// Riemann sum per the inclusive convention: (1/N) sum_{j=ceil(N t_min)}^{floor(N t_max)} f(j/N).
// Note j = N is included when t_max = 1; closed-curve norms instead use
// periodic_sum below, which runs j = 0..N-1.
Complex riemann_sum(const std::function<Complex(double)>& f, int a, double t_min, double t_max);

// (1/N) sum_{j=0}^{N-1} f(j/N): the full-period form used for closed curves.
Complex periodic_sum(const std::function<Complex(double)>& f, int a);

// (1/N) { (t_max-t_min)^2/2 * max|f'| + 2 max|f| }.
double riemann_error_bound(double max_deriv, double max_abs, int a, double t_min, double t_max);

// gamma^{-1}(lambda): closed form for the built-in curves, probe-grid scan with
// local refinement for custom ones.
double curve_parameter(const Curve& curve, Complex lambda);

} // namespace resolvex
