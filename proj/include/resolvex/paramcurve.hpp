#pragma once

#include <string>
#include <vector>

#include "resolvex/estimator.hpp"

namespace resolvex {

// A base curve plus its delta-shift family gamma_delta. Built-ins: circle
// (gamma_delta = (1+delta) gamma), segment (gamma + i delta), ellipse
// (outward-normal shift). Custom families register through Curve::custom.
struct CurveFamily {
    std::string name;
    Curve base;          // carries the shift rule
    double max_speed = 0.0;  // max_t |gamma'(t)|, probed at registration
    bool interior_only = false;  // open curves: probe t away from the endpoints
    double interior_margin = 0.0;

    // per-eigenvalue prefactor^2; built-ins use the canonical constants, other
    // families fall back to 1/(N c_delta) with c_delta from quadrature
    double prefactor_sq(double delta, std::uint64_t n_points) const;
    bool registered_prefactor = false;
};

CurveFamily circle_family();
CurveFamily segment_family(double rho);
CurveFamily ellipse_family(double ax, double by);
// "circle" | "segment" (needs rho) | "ellipse" (needs ax, by)
CurveFamily family_by_name(const std::string& name, double rho = 1.0, double ax = 1.0,
                           double by = 0.5);
CurveFamily make_family(std::string name, Curve base, bool interior_only = false,
                        double interior_margin = 0.0);

struct ConformanceReport {
    std::string family;
    // cond1: window integral of |gamma(t)-gamma_delta(t')|^{-2} constant in t
    double cond1_max_rel_deviation = 0.0;
    // cond2: 1 - window/full ratio scaling like (delta/eps)
    double cond2_constant = 0.0;
    double cond2_r2 = 0.0;
    double cond2_max_ratio = 0.0;
    // cond3: log-log fitted exponent of sup_t' |d/dt' kernel| vs 1/delta
    double cond3_exponent = 0.0;
    bool pass1 = false, pass2 = false, pass3 = false;
    bool passed() const { return pass1 && pass2 && pass3; }

    // declared, adjustable thresholds
    double tol1 = 1e-2;
    double r2_min = 0.9;
    double exponent_max = 6.0;
};

// Numeric checks of the three curve-family conditions over (deltas x epsilons),
// with adaptive quadrature at relative tolerance 1e-6. Throws QuadratureFailure
// when integration fails to converge (near-intersecting family).
ConformanceReport check_conditions(const CurveFamily& fam, const std::vector<double>& deltas,
                                   const std::vector<double>& epsilons, int t_probes);

// Resolvent pipeline on the family's shifted discretization. Built-in circle /
// segment families route through the QEUE / QERE pipeline (same grid, same
// solves); other families use direct summation throughout. Throws
// ConformanceRequired unless `conformance` passed.
EstimationReport generalized_estimate(const CurveFamily& fam, const GeneratedMatrix& gm,
                                      const EstimationConfig& cfg,
                                      const std::vector<Complex>& betas,
                                      std::uint64_t n_samples, std::uint64_t seed,
                                      const ConformanceReport& conformance);

struct RadialEntry {
    double radius = 0.0;
    double success_mass = 0.0;  // in-window marginal mass around the peak
    double peak_t = 0.0;
    double peak_arg = 0.0;  // phase estimate at the peak
};

struct RadialSweep {
    std::vector<RadialEntry> entries;
    std::size_t best = 0;  // index of the radius with maximal success mass
};

// QEUE sweep over circles of radius k*k_delta in [r_min, r_max]: rescales
// A -> A/r and measures the in-window mass fraction around the marginal's peak.
RadialSweep radial_search(const GeneratedMatrix& gm, const ComplexVector& psi, double r_min,
                          double r_max, double k_delta, const EstimationConfig& cfg);

} // namespace resolvex
