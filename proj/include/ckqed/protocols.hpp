// End-to-end drivers for the five information-transfer protocols, composing
// dynamics, measurement and entanglement with per-branch reports.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ckqed/measurement.hpp"
#include "ckqed/state.hpp"

namespace ckqed {

struct ProtocolOptions {
  /// Fock truncation override; negative means the default rule per
  /// component magnitude. Setting it also waives the truncation guard.
  int n_max_override = -1;
  /// delta/lambda ratio used for the dispersive-validity diagnostic.
  double delta_ratio = 50.0;
};

struct ProtocolBranch {
  std::string label;
  double probability = 0.0;
  bool kept = true;
  std::optional<double> vne_bits;
  std::optional<double> fidelity;
  std::optional<double> purity;
  std::optional<HybridState> state;
  std::optional<DensityOperator> density;
};

struct ProtocolReport {
  std::string protocol;
  std::vector<ProtocolBranch> branches;
  std::map<std::string, double> diagnostics;

  double kept_probability() const;
  double discarded_probability() const;
};

/// Ising-gate transfer of a (real) qubit a|0> + b|1> onto a second qubit,
/// with the conditional sigma_x correction and the Hadamard byproduct.
ProtocolReport transfer_qubit_to_qubit(double a, double b);

/// Transfer of a qubit onto the {|i alpha>, |-i alpha>} quasi-qubit of one
/// cavity mode; with postselect only the |->_y outcome is kept.
ProtocolReport transfer_qubit_to_cv(double a, double b, CoherentLabel alpha, bool postselect,
                                    const ProtocolOptions& opt = {});

/// Entanglement transfer from an atomic Bell pair onto two field modes
/// prepared in |alpha>, |beta>; four x-basis outcome branches.
ProtocolReport entanglement_transfer(CoherentLabel alpha, CoherentLabel beta,
                                     const ProtocolOptions& opt = {});

enum class ReciprocationMode { Ideal, Gaussian };

/// Reciprocation of the one-ebit odd entangled coherent state back onto two
/// atoms. Ideal mode projects both modes onto their phase candidates;
/// gaussian mode applies the width-Delta blurred measurement. The input
/// state defaults to the odd state with components -i alpha, -i beta.
ProtocolReport reciprocation(CoherentLabel alpha, CoherentLabel beta, double width,
                             ReciprocationMode mode,
                             const std::optional<HybridState>& input = {},
                             const ProtocolOptions& opt = {});

/// n-pair transfer: pair k interacts with conditional phase pi/2^k; all
/// atoms are measured in the x basis and the branch matching `outcomes`
/// (2n characters '+'/'-', pair-1 atoms first) is analyzed.
ProtocolReport multipair_transfer(int n, CoherentLabel alpha, const std::string& outcomes,
                                  const ProtocolOptions& opt = {});

/// Reverse of multipair_transfer with the interaction signs flipped; both
/// cavities are projected against the 2^n-component candidate set and the
/// success branch (both modes back at |alpha>) is analyzed.
ProtocolReport multipair_reciprocation(int n, CoherentLabel alpha,
                                       const std::optional<HybridState>& input = {},
                                       const ProtocolOptions& opt = {});

/// Swap between an odd two-mode entangled coherent state and an atomic Bell
/// pair, leaving a hybrid atom-mode entangled pair. Mode b is discriminated
/// between its two phases; qubit 2 is measured in the y basis and the
/// branch-dependent local correction (solved numerically) maps every branch
/// to the (|g,alpha> + |e,-alpha>)/sqrt(2) form.
ProtocolReport entanglement_swap(CoherentLabel alpha,
                                 const std::optional<HybridState>& cv_input = {},
                                 const ProtocolOptions& opt = {});

}  // namespace ckqed
