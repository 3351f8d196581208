// Exact Jaynes-Cummings propagator, the dispersive (cross-Kerr) propagator
// and the discrete gates derived from them.

#pragma once

#include <string>

#include "ckqed/state.hpp"

namespace ckqed {

/// Atom-field interaction parameters: detuning delta = w0 - w, coupling
/// lambda, interaction time t (angular-frequency / time units).
struct JCParams {
  double delta = 0.0;
  double lambda = 1.0;
  double t = 0.0;
};

/// Rescaled dispersive interaction phase phi = lambda^2 t / delta.
/// sign = +1 realizes C_p, sign = -1 realizes C_p^dagger (negative detuning).
struct DispersivePhase {
  double phi = 0.0;
  int sign = +1;
};

struct Propagator {
  Matrix matrix;
  RegisterLayout fragment;
  std::string provenance;
  bool truncation_unsafe_top = false;  // top Fock block of the exact propagator

  double unitarity_defect() const {
    return (matrix.adjoint() * matrix - Matrix::Identity(matrix.rows(), matrix.cols()))
        .cwiseAbs()
        .maxCoeff();
  }
};

/// Effective Rabi frequency sqrt(delta^2/4 + lambda^2 n).
double effective_rabi(int n, const JCParams& params);

/// Exact propagator on (qubit x mode), assembled block by block: each pair
/// {|e,n>, |g,n+1>} evolves by a 2x2 unitary, |g,0> by a scalar phase. The
/// top state |e,n_max> keeps only its detuning phase (its partner lies
/// outside the truncated space) and is flagged truncation-unsafe.
Propagator exact_jc_propagator(const JCParams& params, int n_max);

/// Diagonal conditional phase on (qubit x mode):
/// e^{-i sign phi (n+1)} |e><e| + e^{+i sign phi n} |g><g|.
Propagator dispersive_propagator(DispersivePhase phase, int n_max);

/// Atomic frame rotation at the detuning, e^{-i|delta|t/2}|g><g| +
/// e^{+i|delta|t/2}|e><e| on (qubit x mode). Composing it after the exact
/// propagator yields the state the dispersive form approximates.
Propagator rotating_frame(const JCParams& params, int n_max);

/// Two-qubit control-phase diag(1, 1, 1, e^{-i chi}); at chi = pi a phase
/// flip only when both qubits are |1>. This is the Ising-type interaction
/// with the ground-state energy rescaled to zero and local phases absorbed.
Propagator ising_gate(double chi);

struct ValidityReport {
  double r1 = 0.0;  // delta^2 / (4 lambda^2 nbar)
  double r2 = 0.0;  // delta^2 / (4 lambda^2 dn)
  double threshold = 0.0;
  bool pass = false;
};

/// Dispersive-regime check delta^2/4 >> lambda^2 nbar, lambda^2 dn.
ValidityReport dispersive_validity(const JCParams& params, double nbar, double dn,
                                   double threshold = 100.0);

}  // namespace ckqed
