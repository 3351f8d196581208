// Truncated Fock-space and qubit tensor algebra: state construction,
// operators, composition and reduction.

#pragma once

#include <span>
#include <vector>

#include "ckqed/state.hpp"

namespace ckqed {

/// Truncated |alpha>, renormalized. Rejects n_max below the default
/// truncation rule for |alpha| unless allow_low_truncation is set.
HybridState coherent_state(CoherentLabel alpha, int n_max, bool allow_low_truncation = false);

/// Weight of the discarded Poisson tail, 1 - sum_{n<=n_max} e^{-a^2} a^{2n}/n!.
double coherent_truncation_loss(CoherentLabel alpha, int n_max);

/// Displacement operator D(beta) in the number basis, unitary on the
/// retained subspace up to truncation. The guard is keyed on |beta| plus the
/// magnitude of the largest coherent component it will act on.
Matrix displacement(CoherentLabel beta, int n_max, double acting_magnitude = 0.0,
                    bool allow_low_truncation = false);

/// Single-qubit state g_amp|g> + e_amp|e|  (|0> = |g|, |1> = |e>).
HybridState qubit_state(Complex g_amp, Complex e_amp);

/// Composite of two registers in the canonical order (all qubits first, then
/// all modes); amplitudes are permuted accordingly.
HybridState tensor(const HybridState& u, const HybridState& v);

/// c1*u + c2*v on a shared layout (not normalized).
HybridState superpose(Complex c1, const HybridState& u, Complex c2, const HybridState& v);

Matrix kron(const Matrix& a, const Matrix& b);

/// Operator on the listed target subsystems (in the given order) lifted to
/// the full register, identity elsewhere. Dense; intended for small layouts.
Matrix embed(const Matrix& op, std::span<const int> targets, const RegisterLayout& layout);

/// Apply an operator on the listed target subsystems to a state without
/// forming the full-space matrix.
HybridState apply(const Matrix& op, std::span<const int> targets, const HybridState& state);

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep);
DensityOperator partial_trace(const HybridState& psi, std::span<const int> keep);

/// (<ket| x I) |state>: contract one subsystem against a ket, removing it
/// from the register. The result is not normalized.
HybridState project_out(const Vector& ket, int subsystem, const HybridState& state);

}  // namespace ckqed
