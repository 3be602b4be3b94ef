#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "resolvex/curves.hpp"
#include "resolvex/matgen.hpp"

namespace resolvex {

enum class SolveMode { direct, analytic };

// M = Z (x) I - I (x) A, held implicitly as the family of blocks z_j I - A.
// The dense (2^a 2^n)^2 matrix is never formed.
struct ResolventSystem {
    GeneratedMatrix gm;
    DiscretizedCurve dcurve;
    Problem problem = Problem::QEUE;
    double alpha_M = 0.0;
    SolveMode mode = SolveMode::analytic;

    double delta() const { return dcurve.delta(); }
    std::uint64_t n_blocks() const { return dcurve.n(); }
};

// Throws SpectrumOnContour when some grid point sits within 1e-10 of an
// eigenvalue. alpha_M is (1+delta)+alpha_A for QEUE, sqrt(rho^2+delta^2)+alpha_A
// for QERE.
ResolventSystem build_system(const GeneratedMatrix& gm, const DiscretizedCurve& dcurve, Problem p);

// Squared per-eigenvalue prefactor: delta(2+delta)/2^a (closed circle) or
// rho*delta/(2^{a-1} pi) (segment).
double prefactor_squared(Problem p, const DiscretizedCurve& dcurve);

struct EigComponent {
    Complex lambda;
    Complex beta;       // effective coefficient of psi in the eigenvector basis
    std::size_t block;  // index into gm.spec.blocks
};

// The joint ancilla (x) system state psi-tilde, with its per-eigenvalue
// decomposition. joint, when materialized, is ancilla-major and carries the
// paper prefactor, so joint = sum_l beta_l (prefactor * phi_l) (x) s_l.
struct ResolventState {
    Problem problem = Problem::QEUE;
    DiscretizedCurve dcurve;
    double prefactor = 1.0;
    std::vector<EigComponent> components;
    std::vector<ComplexVector> eigvecs;  // s_l matching components
    std::size_t sys_dim = 0;
    std::vector<Complex> joint;  // size n * sys_dim when materialized, else empty
    double norm = 0.0;           // ||psi_tilde||
    bool perturbed = false;

    bool materialized() const { return !joint.empty(); }
    std::uint64_t n() const { return dcurve.n(); }
    // (z_j - lambda_l)^{-1}, the raw ancilla amplitude before the prefactor.
    Complex raw_amplitude(std::size_t l, std::uint64_t j) const;
    // squared norm of ancilla block j of the materialized joint
    double block_mass(std::uint64_t j) const;
    ComplexVector system_block(std::uint64_t j) const;
};

struct ResolventOptions {
    std::optional<SolveMode> mode;              // overrides the system's mode
    std::uint64_t joint_entry_cap = std::uint64_t(1) << 26;
    bool require_materialized = false;
    double perturb_eps_st = 0.0;  // models the linear-solver accuracy budget:
                                  // adds eps_st/2 relative noise to the normalized state
    std::uint64_t perturb_seed = 1;
};

ResolventState resolvent_state(const ResolventSystem& sys, const ComplexVector& psi,
                               const ResolventOptions& opts = {});

struct MInverseCheck {
    double bound = 0.0;       // kreiss_value / delta
    double actual_max = 0.0;  // max_j ||(z_j I - A)^{-1}||
};

// Throws BoundViolated when the measured max exceeds bound*(1+1e-6), which
// signals an under-sampled Kreiss estimate.
MInverseCheck m_inverse_norm_bound(const ResolventSystem& sys, double kreiss_value);

// ---- per-eigenvalue mass machinery ----------------------------------------

struct MassSums {
    enum class Path { direct_full, window_exact, integral_interval };
    double window_mass = 0.0;  // a_l^2, prefactored
    double full_mass = 0.0;    // ||phi_l||^2, prefactored
    double tail_mass = 0.0;    // b_l^2 = full - window, clamped at 0
    double interval_halfwidth = 0.0;  // eps_disc when path == integral_interval
    double window_integral = 0.0;     // closed-form integral of the density over the window
    double full_integral = 0.0;       // closed-form integral over [0,1]
    Path path = Path::direct_full;
};

// Exact a_l^2 / ||phi_l||^2 for one eigenvalue. Dispatches on the curve kind:
//  - materialized grids: one direct pass (shared with the generalized pipeline);
//  - unit circle: exact window summation + root-of-unity closed form for the
//    full-domain sum;
//  - segment: digamma partial sums, exact at any grid size;
//  - otherwise: closed-form integral +- the discretization bound.
// pref_sq < 0 selects the canonical prefactor for the curve kind.
MassSums eig_mass_sums(const DiscretizedCurve& dcurve, Complex lambda, const WindowProjector& w,
                       double pref_sq = -1.0);

// Direct pass over materialized points: (window sum, full sum) of 1/|z_j-lambda|^2.
struct DirectMass {
    double window_sum = 0.0;
    double full_sum = 0.0;
};
DirectMass direct_mass_sums(const std::vector<Complex>& points, Complex lambda,
                            const WindowProjector& w);

// sum_j conj((z_j-lambda_l)^{-1}) (z_j-lambda_m)^{-1} over the whole grid,
// in closed form (works at any 2^a).
Complex full_cross_sum(const DiscretizedCurve& dcurve, Complex lambda_l, Complex lambda_m);

// Discretization-error budget of the mass lemmas: (3 sqrt2 pi + 6)/(2^a delta^2)
// on the circle, 5 rho/(pi 2^a delta^2) on the segment.
double discretization_bound(const DiscretizedCurve& dcurve);

// Apply the analytic block resolvent (z I - J)^{-1} for the given Jordan data.
void jordan_resolvent_apply(const JordanSpec& spec, double subdiag_scale, Complex z,
                            const ComplexVector& in, ComplexVector& out);

// Ancilla marginal ||(z_j I - A)^{-1} psi||^2 / sum_j(...) for an arbitrary psi,
// by direct per-block solves (materialized grids only). Used by sweeps that
// run without a known eigendecomposition.
std::vector<double> resolvent_marginal(const ComplexMatrix& a, const DiscretizedCurve& dcurve,
                                       const ComplexVector& psi);

} // namespace resolvex
