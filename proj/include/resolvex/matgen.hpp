#pragma once

#include <cstdint>
#include <vector>

#include "resolvex/numkit.hpp"

namespace resolvex {

enum class Problem { QEUE, QERE };

struct JordanBlock {
    Complex lambda;
    int d = 1;
};

// Declarative description of a spectrum with known Jordan structure. The
// generated matrix is A = T J T^{-1}; J uses the sub-diagonal-1 block layout,
// so the rank-1 eigenvector of each block sits at the block's last index.
struct JordanSpec {
    std::vector<JordanBlock> blocks;
    double transform_cond = 1.0;
    std::uint64_t seed = 0;
    // T = I instead of a random conditioned transform (exact Jordan output).
    bool identity_transform = false;

    std::size_t dim() const;
    void validate() const;  // throws BadSpec
};

struct GeneratedMatrix {
    ComplexMatrix A;
    ComplexMatrix T;
    ComplexMatrix T_inv;
    JordanSpec spec;
    double subdiag_scale = 1.0;  // J sub-diagonal entries (1/r after rescaling by r)
    double kappa_bar_witness = 1.0;  // ||T|| ||T^{-1}|| for the constructed T; upper bound on kappa-bar
    double alpha = 1.0;              // block-encoding normalization, >= ||A||
    std::vector<ComplexVector> block_eigvecs;  // normalized T e_{end(l)}, one per block

    std::size_t dim() const { return A.dim(); }
    ComplexMatrix jordan_matrix() const;
    int max_block_dim() const;

    // Blocks whose eigenvalue lies on the problem's curve (unit circle / real axis).
    std::vector<std::size_t> on_curve_blocks(Problem p) const;
    std::vector<ComplexVector> eigvec_columns(Problem p) const;
    double kappa_S(Problem p) const;

    GeneratedMatrix rescaled(double r) const;  // A -> A/r, spectrum lambda/r
};

GeneratedMatrix generate(const JordanSpec& spec);

// True iff every spec eigenvalue respects the QEUE annulus (1, 1+eps_eig) /
// QERE strip Im in (0, eps_eig) exclusion promise.
bool validate_exclusion(const GeneratedMatrix& gm, Problem p, double eps_eig);

struct InputState {
    ComplexVector psi;                   // normalized
    std::vector<Complex> beta_effective; // betas divided by the normalizing factor
};

// Normalized sum beta_l s_l over the problem's on-curve eigenvectors.
InputState input_state(const GeneratedMatrix& gm, const std::vector<Complex>& betas, Problem p);

// Illustrative PT-symmetric 2x2 toy generator [[i g, s],[s, -i g]];
// spectrum +-sqrt(s^2-g^2), real (unbroken) iff s >= g.
ComplexMatrix pt_symmetric_2x2(double g, double s);

} // namespace resolvex
