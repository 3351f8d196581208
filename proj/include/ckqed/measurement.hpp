// Projective atomic measurements, ideal and Gaussian-blurred coherent-state
// measurements, and the homodyne phase discriminator.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckqed/dynamics.hpp"
#include "ckqed/state.hpp"

namespace ckqed {

/// x: |+-> = (|g> +- |e>)/sqrt(2); y: (|g> +- i|e>)/sqrt(2); z: {|e>, |g>}.
enum class AtomAxis { X, Y, Z };

/// One post-measurement branch. A zero-probability branch carries no state.
struct BranchOutcome {
  std::string label;
  double probability = 0.0;
  std::optional<HybridState> state;
};

/// Projective measurement of one atom; the atom leaves the register.
/// Labels: "+"/"-" for x and y, "e"/"g" for z.
std::vector<BranchOutcome> project_atom(const HybridState& state, int atom, AtomAxis axis);

/// Projection of one mode onto a set of (nonorthogonal) coherent candidates,
/// renormalized over the set; the mode leaves the register. Labels are the
/// candidate indices "0", "1", ... The mode's weight outside the candidate
/// span must stay below residual_bound.
std::vector<BranchOutcome> ideal_phase_projection(const HybridState& state, int mode,
                                                  const std::vector<CoherentLabel>& candidates,
                                                  double residual_bound = 1e-6);

/// Gaussian-weighted coherent projection of both modes, centers (chi_a,
/// chi_b), common width Delta. The weighting (2 pi Delta)^{-1/2}
/// e^{-(mu-chi)^2/(2 Delta)} integrates to one.
struct GaussianPovm {
  CoherentLabel center_a, center_b;
  double width = 0.0;
};

struct GaussianMeasurementResult {
  DensityOperator rho12;     // conditioned two-qubit state
  // Block weights in the convention where the four-component input state
  // enters unnormalized; p1/p2/p3 from the kernel quadrature, the _closed
  // pair from the Gaussian-overlap closed forms.
  double p1 = 0, p2 = 0, p3 = 0;
  double p1_closed = 0, p2_closed = 0;
  double fidelity = 0;                    // <psi_+|rho12|psi_+> from the quadrature route
  double fidelity_closed = 0;             // closed form p2/(p1+p2)
  double event_weight = 0;                // smeared-outcome mass on the input state
  double quadrature_error = 0;            // kernel refinement estimate
  double out_of_block_weight = 0;         // rho12 weight outside span{|phi_->, |psi_+>}
};

/// Measurement of the (2 qubit + 2 mode) state by rank-one coherent
/// projections averaged over Gaussian-distributed outcomes around the
/// centers. Both evaluation routes are returned for cross-checking.
GaussianMeasurementResult gaussian_cv_measurement(const HybridState& state,
                                                  const GaussianPovm& povm,
                                                  double abs_tol = 1e-6);

struct HomodyneResult {
  std::vector<BranchOutcome> branches;  // probe outcomes "e", "g"
  double ground_probability = 0.0;      // P(probe measured in |g>)
};

/// Phase discrimination of a mode supported on {|i alpha>, |-i alpha>}:
/// displace by D(i alpha) (the pair maps to ~{|2 i alpha>, |0>}), couple a
/// ground-state probe atom resonantly for rescaled time lambda*t, measure
/// the probe in z. A probe found in |e> certifies the bright component; the
/// vacuum component leaves the probe in |g> with probability exactly 1.
HomodyneResult homodyne_phase_discriminator(const HybridState& state, int mode,
                                            CoherentLabel alpha, const JCParams& probe);

}  // namespace ckqed
