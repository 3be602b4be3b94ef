#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resolvex/resolvent.hpp"

namespace resolvex {

enum class ParameterMode { strict_theorem, feasible };

struct EstimationConfig {
    Problem problem = Problem::QEUE;
    double eps_eig = 0.1;
    double eps_st = 0.1;
    double kappa_S = 1.0;
    double alpha_A = 1.0;
    ParameterMode mode = ParameterMode::feasible;
    double delta = 0.0;
    int a = 1;
    bool delta_user_set = false;
    bool a_user_set = false;
    bool lemma_hypotheses_met = true;  // delta <= eps_eig/4 and 2^a >= grid bound
    bool direct_feasible = true;       // grid small enough to materialize states
    double theta_ratio = 0.0;          // delta / (eps_eig eps_st^2 / kappa_S^4)

    double rho() const { return alpha_A + eps_eig; }  // QERE segment half-length
    double grid_lower_bound() const;                  // required 2^a
    // window half-width in t implemented from the lemmas' t_±
    double window_halfwidth_t() const;
    // the problem-statement convention (differs for QERE; reported alongside)
    double problem_header_halfwidth_t() const;
};

// Largest admissible delta under the mode's constraint and smallest a meeting
// the grid bound. Throws InfeasibleGrid when the required a exceeds 63, and
// ConfigError on inconsistent explicit choices.
EstimationConfig select_parameters(Problem p, double eps_eig, double eps_st, double kappa_S,
                                   double alpha_A, ParameterMode mode,
                                   std::optional<double> user_delta = std::nullopt,
                                   std::optional<int> user_a = std::nullopt);

WindowProjector window_for(const EstimationConfig& cfg, const DiscretizedCurve& dcurve,
                           Complex lambda);

struct EigMassReport {
    Complex lambda;
    double a_l = 0.0;  // ||P phi_l|| with prefactor
    double b_l = 0.0;  // ||Q phi_l||
    double a_sq = 0.0, b_sq = 0.0, full_sq = 0.0;
    double window_integral = 0.0, full_integral = 0.0;
    double interval_halfwidth = 0.0;
    double ratio_dev = 0.0;  // |1 - a_0/a_l|
    std::string path;
};

struct SuccessReport {
    std::vector<EigMassReport> eigs;
    double a_bound_lo = 0.5;
    double a_bound_hi = 1.118033988749895;  // sqrt(5)/2
    double ratio_bound = 0.0;               // 4 delta / eps_eig
    double b_bound = 0.0;                   // sqrt(2(1+1/pi) delta/eps_eig)
    bool hypotheses_met = false;
    bool bounds_hold = false;  // the three lemma assertions across eigs

    // theorem-proof decomposition aggregates (exact-path states only)
    bool aggregates_computed = false;
    double psi1_norm = 0.0, psi2_norm = 0.0, psi3_norm = 0.0;
    double total_failure_mass = 0.0;  // ||psi_3||^2 / ||psi||^2
};

// Per-eigenvalue success/failure masses with the lemma bounds attached.
// Throws HypothesisViolated when delta > eps_eig/4 or the grid bound is unmet.
SuccessReport success_masses(const ResolventState& rs, const EstimationConfig& cfg,
                             const GeneratedMatrix& gm);

// Same computation without the precondition gate; used by pipelines that run
// outside the lemma regime (user-set grids) and by reports.
SuccessReport measure_masses(const ResolventState& rs, const EstimationConfig& cfg,
                             const GeneratedMatrix& gm, bool with_aggregates = false);

struct ReadoutSample {
    std::uint64_t j = 0;
    double t = 0.0;
    double estimate = 0.0;  // arg for QEUE, value for QERE
    std::size_t attributed = 0;
    bool in_window = false;
    double param_error = 0.0;  // |t - t_lambda| (modular for QEUE)
};

struct ModalEstimate {
    std::size_t component = 0;
    std::uint64_t j = 0;
    double t = 0.0;
    double estimate = 0.0;
    std::uint64_t hits = 0;
};

struct EstimationReport {
    EstimationConfig config;
    SuccessReport success;
    std::uint64_t n_samples = 0;
    std::uint64_t rng_seed = 0;
    double empirical_failure_rate = 0.0;
    std::vector<ModalEstimate> modal;          // per attributed component
    std::vector<ReadoutSample> samples;        // kept only up to sample_keep_cap
    static constexpr std::uint64_t sample_keep_cap = 4096;
    double cost = 0.0;        // filled by callers holding a Kreiss value
    double wall_ms = 0.0;     // filled by the CLI when timing is requested
    std::string note;
};

// Samples ancilla indices from the exact marginal of rs (materialized states),
// attributes each sample to an eigenvalue through the dual basis of S, and
// aggregates window hits, failures and modal estimates.
EstimationReport readout(const ResolventState& rs, const EstimationConfig& cfg,
                         const GeneratedMatrix& gm, std::uint64_t n_samples,
                         std::uint64_t rng_seed);

struct StateErrorCertificate {
    double psi1_norm = 0.0, psi2_norm = 0.0, psi3_norm = 0.0;
    double psi1_lower = 0.0;   // a_0 / kappa_S
    double psi2_upper = 0.0;   // kappa_S max |1 - a0/a_l| a_l
    double psi3_upper = 0.0;   // kappa_S max b_l
    double ratio2 = 0.0, ratio3 = 0.0;
    double strict_ratio_bound = 0.0;  // eps_st/8 in strict mode
    double normalized_distance_bound = 0.0;  // 2 (ratio2 + ratio3)
    bool exact_path = true;  // false when certified from integral bounds only
};

// Theorem-proof decomposition certificate; throws CertificateFailed naming the
// violated inequality.
StateErrorCertificate state_error_certificate(const ResolventState& rs,
                                              const EstimationConfig& cfg,
                                              const GeneratedMatrix& gm);

// <psi|(A+A^H)/2|psi> for a state within state_error of eigenvector
// lambda_index (QERE on-curve ordering); additive error <= 2 alpha_A state_error + O(err^2).
double baseline_expectation(const GeneratedMatrix& gm, std::size_t lambda_index,
                            double state_error, std::uint64_t seed = 0);

// alpha_A kappa_S^4 K / (eps_eig eps_st^2) * ln(1/eps_st): the theorem scaling
// product, no hidden constant.
double cost_score(const EstimationConfig& cfg, double alpha_A, double kreiss_value,
                  double kappa_S);

} // namespace resolvex
