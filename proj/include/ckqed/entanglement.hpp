// Coherent-state qubit embeddings, ebit conditions, entropy and fidelity.

#pragma once

#include <vector>

#include "ckqed/state.hpp"

namespace ckqed {

/// Orthonormal 2D embedding of a coherent pair {|alpha>, |beta>}:
///   |psi_+> = (e^{-i phi/2} cos(theta) |alpha> - e^{+i phi/2} sin(theta) |beta>) / cos(2 theta)
///   |psi_-> = (-e^{-i phi/2} sin(theta) |alpha> + e^{+i phi/2} cos(theta) |beta>) / cos(2 theta)
/// with sin(2 theta) = |<alpha|beta>| and e^{-i phi} = <alpha|beta>/|<alpha|beta>|.
struct CoherentQubitBasis {
  double theta = 0.0;
  double phi = 0.0;
  double n_f = 1.0;  // cos(2 theta)
  CoherentLabel alpha, beta;
  HybridState psi_plus;
  HybridState psi_minus;

  /// (n_max+1) x 2 isometry with columns |psi_+>, |psi_->.
  Matrix isometry() const;
};

CoherentQubitBasis coherent_qubit_basis(CoherentLabel alpha, CoherentLabel beta, int n_max);

/// Loewdin-orthonormalized isometry spanning an arbitrary coherent component
/// set; columns are orthonormal, span equals span of the components.
Matrix coherent_span_isometry(const std::vector<CoherentLabel>& components, int n_max);

struct EbitQuery {
  enum class Variant { SameSame, Cross };
  CoherentLabel alpha, beta;
  double psi = 0.0;  // relative superposition phase
  Variant variant = Variant::SameSame;
};

struct EbitVerdict {
  bool one_ebit = false;
  double amplitude_residual = 0.0;  // |sin 2theta_a - sin 2theta_b|
  double phase_residual = 0.0;      // distance of the phase condition from 0 (radians)
};

/// One-ebit check for |alpha,alpha> + e^{i psi}|beta,beta> (SameSame) or
/// |alpha,beta> + e^{i psi}|beta,alpha> (Cross).
EbitVerdict one_ebit_condition(const EbitQuery& query, double tol = 1e-8);

/// -sum lambda_i log2 lambda_i, with 0 log 0 = 0. Eigenvalues in
/// [-1e-8, 0) are clamped to zero; anything lower is an error.
double von_neumann_entropy(const DensityOperator& rho);

/// <target|rho|target>.
double state_fidelity(const DensityOperator& rho, const HybridState& target);

/// Coefficients of a pure two-mode state in the embedded bases given by two
/// isometries, plus the weight left outside the embedded span.
struct EmbeddedTwoMode {
  Matrix coefficients;  // m_a x m_b
  double residual = 0.0;
};
EmbeddedTwoMode project_two_mode(const HybridState& state, const Matrix& isometry_a,
                                 const Matrix& isometry_b);

/// Entanglement entropy of a pure bipartite state given by its (not
/// necessarily normalized) coefficient matrix.
double schmidt_entropy(const Matrix& coefficients);

}  // namespace ckqed
