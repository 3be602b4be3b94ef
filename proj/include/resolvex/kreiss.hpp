#pragma once

#include <optional>

#include "resolvex/numkit.hpp"

namespace resolvex {

enum class ContourKind { vertical_line, circle };

// Sampled restricted Kreiss constant. `value` is delta times the refined
// supremum of the resolvent norm over the contour; sampling plus local
// refinement makes it a lower estimate of the true sup.
struct KreissEstimate {
    double value = 0.0;
    double sampled_value = 0.0;  // before golden-section refinement
    double delta = 0.0;
    ContourKind contour = ContourKind::circle;
    long samples = 0;
    int refinement_passes = 3;
    Complex argmax_z;
    std::optional<double> analytic_bound;  // filled by callers holding Jordan data
};

// ||(z I - C)^{-1}|| = 1/sigma_min(z I - C); throws ContourHitsSpectrum when
// z I - C is singular to working precision.
double resolvent_norm(const ComplexMatrix& c, Complex z);

// delta * sup over |z| = 1+delta. samples <= 0 selects the adaptive default
// max(4096, ceil(8 * contour length / delta)).
KreissEstimate kreiss_circle(const ComplexMatrix& c, double delta, long samples = 0);

// delta * sup over z = delta + iy, y in [-y_range, y_range]. y_range <= 0
// selects the default 2(||C||+1), outside which the resolvent norm provably
// stays below the interior peak. QERE callers pass C = -iA.
KreissEstimate kreiss_line(const ComplexMatrix& c, double delta, double y_range = 0.0,
                           long samples = 0);

// kappa_bar * (1/delta)^{d-1} * (1-delta^d)/(1-delta), delta in (0,1).
double jordan_kreiss_bound(double kappa_bar, int d, double delta);

// kappa_bar * (1-dist^d)/(dist^d (1-dist)), dist in (0,1).
double resolvent_norm_bound(double kappa_bar, int d, double dist);

// Diagnostic: max over a t-grid of ||exp(C t)||, t in [0, t_max].
double transient_growth_probe(const ComplexMatrix& c, double t_max, int samples = 64);

} // namespace resolvex
