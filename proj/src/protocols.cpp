#include "ckqed/protocols.hpp"

#include <cmath>

#include "ckqed/dynamics.hpp"
#include "ckqed/entanglement.hpp"
#include "ckqed/hilbert.hpp"

namespace ckqed {
namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix sigma_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix hadamard() {
  Matrix m(2, 2);
  m << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  return m;
}

/// (|ge> + |eg>)/sqrt(2)
HybridState bell_psi_plus() {
  Vector amps(4);
  amps << 0, kInvSqrt2, kInvSqrt2, 0;
  return HybridState(RegisterLayout::qubits(2), amps);
}

int resolve_n_max(double magnitude, const ProtocolOptions& opt) {
  return opt.n_max_override >= 0 ? opt.n_max_override : default_n_max(magnitude);
}

HybridState make_coherent(CoherentLabel label, int n_max, const ProtocolOptions& opt) {
  return coherent_state(label, n_max, opt.n_max_override >= 0);
}

void add_common_diagnostics(ProtocolReport& rep, double magnitude, int n_max,
                            const ProtocolOptions& opt) {
  rep.diagnostics["truncation_loss"] =
      coherent_truncation_loss(CoherentLabel(magnitude, 0.0), n_max);
  const ValidityReport v = dispersive_validity(JCParams{opt.delta_ratio, 1.0, 1.0},
                                               magnitude * magnitude, magnitude);
  rep.diagnostics["validity_r1"] = v.r1;
  rep.diagnostics["validity_r2"] = v.r2;
  rep.diagnostics["validity_pass"] = v.pass ? 1.0 : 0.0;
}

double entropy_keeping(const HybridState& s, std::initializer_list<int> keep) {
  return von_neumann_entropy(partial_trace(s, std::vector<int>(keep)));
}

/// Best single-qubit unitary on subsystem 0 aligning a (qubit x mode) state
/// with a target, by SVD of the 2x2 mode-overlap matrix.
Matrix align_qubit(const HybridState& branch, const HybridState& target) {
  const long dm = branch.layout().subsystem_dim(1);
  Matrix a(2, 2);
  for (int s = 0; s < 2; ++s)
    for (int sp = 0; sp < 2; ++sp) {
      Complex acc = 0.0;
      for (long m = 0; m < dm; ++m)
        acc += std::conj(target.amplitudes()(s * dm + m)) * branch.amplitudes()(sp * dm + m);
      a(s, sp) = acc;
    }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixV() * svd.matrixU().adjoint();
}

/// Odd (sign -1) or even (sign +1) two-mode entangled coherent state
/// |mu_a, mu_b> + sign |-mu_a, -mu_b>, normalized.
HybridState entangled_coherent_state(CoherentLabel mu_a, CoherentLabel mu_b, double sign,
                                     int n_a, int n_b, const ProtocolOptions& opt) {
  const HybridState pp = tensor(make_coherent(mu_a, n_a, opt), make_coherent(mu_b, n_b, opt));
  const HybridState mm = tensor(make_coherent(CoherentLabel(-mu_a.amplitude), n_a, opt),
                                make_coherent(CoherentLabel(-mu_b.amplitude), n_b, opt));
  return superpose(1.0, pp, sign, mm).normalized();
}

void require_two_mode_span(const HybridState& s, const std::vector<CoherentLabel>& comps_a,
                           const std::vector<CoherentLabel>& comps_b, const char* what) {
  if (s.layout().qubit_count() != 0 || s.layout().mode_count() != 2)
    throw PreconditionError(std::string(what) + ": expected a two-mode state");
  if (std::abs(s.squared_norm() - 1.0) > 1e-8)
    throw PreconditionError(std::string(what) + ": input state is not normalized");
  const int keep_a[] = {0}, keep_b[] = {1};
  const Matrix va = coherent_span_isometry(comps_a, s.layout().subsystem_dim(0) - 1);
  const Matrix vb = coherent_span_isometry(comps_b, s.layout().subsystem_dim(1) - 1);
  const double ra =
      1.0 - (va.adjoint() * partial_trace(s, keep_a).matrix() * va).trace().real();
  const double rb =
      1.0 - (vb.adjoint() * partial_trace(s, keep_b).matrix() * vb).trace().real();
  if (ra > 1e-8 || rb > 1e-8)
    throw PreconditionError(std::string(what) + ": input not in the expected two-mode span");
}

}  // namespace

double ProtocolReport::kept_probability() const {
  double p = 0.0;
  for (const auto& b : branches)
    if (b.kept) p += b.probability;
  return p;
}

double ProtocolReport::discarded_probability() const {
  double p = 0.0;
  for (const auto& b : branches)
    if (!b.kept) p += b.probability;
  return p;
}

ProtocolReport transfer_qubit_to_qubit(double a, double b) {
  if (std::abs(a * a + b * b - 1.0) > 1e-9)
    throw PreconditionError("transfer_qubit_to_qubit: input amplitudes are not normalized");

  HybridState state = tensor(qubit_state(a, b), qubit_state(kInvSqrt2, kInvSqrt2));
  const int both[] = {0, 1};
  state = apply(ising_gate(kPi).matrix, both, state);

  const HybridState target = qubit_state(a, b);
  ProtocolReport rep{"transfer-qubit-to-qubit", {}, {}};
  const int q0[] = {0};
  for (BranchOutcome& m : project_atom(state, 0, AtomAxis::X)) {
    ProtocolBranch br;
    br.label = m.label;
    br.probability = m.probability;
    if (m.state) {
      HybridState out = *m.state;
      if (m.label == "-") out = apply(sigma_x(), q0, out);
      out = apply(hadamard(), q0, out);
      br.fidelity = target.fidelity(out);
      br.purity = 1.0;
      br.state = std::move(out);
    }
    rep.branches.push_back(std::move(br));
  }
  return rep;
}

ProtocolReport transfer_qubit_to_cv(double a, double b, CoherentLabel alpha, bool postselect,
                                    const ProtocolOptions& opt) {
  if (std::abs(a * a + b * b - 1.0) > 1e-9)
    throw PreconditionError("transfer_qubit_to_cv: input amplitudes are not normalized");
  const int n_max = resolve_n_max(alpha.magnitude(), opt);

  HybridState state = tensor(qubit_state(a, b), make_coherent(alpha, n_max, opt));
  const int pair[] = {0, 1};
  state = apply(dispersive_propagator({kPi / 2, +1}, n_max).matrix, pair, state);

  const Complex i_alpha = Complex(0, 1) * alpha.amplitude;
  const CoherentQubitBasis basis =
      coherent_qubit_basis(CoherentLabel(i_alpha), CoherentLabel(-i_alpha), n_max);
  const HybridState target = superpose(a, basis.psi_plus, b, basis.psi_minus).normalized();

  ProtocolReport rep{"transfer-qubit-to-cv", {}, {}};
  for (BranchOutcome& m : project_atom(state, 0, AtomAxis::Y)) {
    ProtocolBranch br;
    br.label = m.label;
    br.probability = m.probability;
    br.kept = !postselect || m.label == "-";
    if (m.state) {
      br.fidelity = target.fidelity(*m.state);
      br.purity = 1.0;
      br.state = std::move(*m.state);
    }
    rep.branches.push_back(std::move(br));
  }
  rep.diagnostics["quasi_qubit_overlap"] =
      std::abs(coherent_overlap(CoherentLabel(i_alpha), CoherentLabel(-i_alpha)));
  add_common_diagnostics(rep, alpha.magnitude(), n_max, opt);
  return rep;
}

ProtocolReport entanglement_transfer(CoherentLabel alpha, CoherentLabel beta,
                                     const ProtocolOptions& opt) {
  const int n_a = resolve_n_max(alpha.magnitude(), opt);
  const int n_b = resolve_n_max(beta.magnitude(), opt);

  HybridState state =
      tensor(tensor(bell_psi_plus(), make_coherent(alpha, n_a, opt)), make_coherent(beta, n_b, opt));
  const int pair_1a[] = {0, 2}, pair_2b[] = {1, 3};
  state = apply(dispersive_propagator({kPi / 2, +1}, n_a).matrix, pair_1a, state);
  state = apply(dispersive_propagator({kPi / 2, -1}, n_b).matrix, pair_2b, state);

  const Complex ia = Complex(0, 1) * alpha.amplitude;
  const Complex ib = Complex(0, 1) * beta.amplitude;
  const CoherentQubitBasis basis_a = coherent_qubit_basis(CoherentLabel(ia), CoherentLabel(-ia), n_a);
  const CoherentQubitBasis basis_b = coherent_qubit_basis(CoherentLabel(ib), CoherentLabel(-ib), n_b);
  const Matrix iso_a = basis_a.isometry();
  const Matrix iso_b = basis_b.isometry();

  // Branch targets: odd state for equal outcomes, even for opposite.
  auto cat_target = [&](double sign) {
    const HybridState pp = tensor(make_coherent(CoherentLabel(ia), n_a, opt),
                                  make_coherent(CoherentLabel(ib), n_b, opt));
    const HybridState mm = tensor(make_coherent(CoherentLabel(-ia), n_a, opt),
                                  make_coherent(CoherentLabel(-ib), n_b, opt));
    return superpose(1.0, pp, sign, mm).normalized();
  };
  const HybridState odd = cat_target(-1.0);
  const HybridState even = cat_target(+1.0);

  ProtocolReport rep{"entanglement-transfer", {}, {}};
  double max_residual = 0.0;
  for (BranchOutcome& m1 : project_atom(state, 0, AtomAxis::X)) {
    if (!m1.state) {
      for (const char* s2 : {"+", "-"})
        rep.branches.push_back({"(" + m1.label + "," + s2 + ")", 0.0, true, {}, {}, {}, {}, {}});
      continue;
    }
    for (BranchOutcome& m2 : project_atom(*m1.state, 0, AtomAxis::X)) {
      ProtocolBranch br;
      br.label = "(" + m1.label + "," + m2.label + ")";
      br.probability = m1.probability * m2.probability;
      if (m2.state) {
        const EmbeddedTwoMode emb = project_two_mode(*m2.state, iso_a, iso_b);
        max_residual = std::max(max_residual, emb.residual);
        br.vne_bits = schmidt_entropy(emb.coefficients);
        br.fidelity = (m1.label == m2.label ? odd : even).fidelity(*m2.state);
        br.purity = 1.0;
        br.state = std::move(*m2.state);
      }
      rep.branches.push_back(std::move(br));
    }
  }
  rep.diagnostics["embedding_residual_max"] = max_residual;
  add_common_diagnostics(rep, std::max(alpha.magnitude(), beta.magnitude()),
                         std::max(n_a, n_b), opt);
  return rep;
}

ProtocolReport reciprocation(CoherentLabel alpha, CoherentLabel beta, double width,
                             ReciprocationMode mode, const std::optional<HybridState>& input,
                             const ProtocolOptions& opt) {
  // A supplied input dictates the truncations; otherwise the rule does.
  const bool sized_by_input = input && input->layout().qubit_count() == 0 &&
                              input->layout().mode_count() == 2;
  const int n_a = sized_by_input ? input->layout().subsystem_dim(0) - 1
                                 : resolve_n_max(alpha.magnitude(), opt);
  const int n_b = sized_by_input ? input->layout().subsystem_dim(1) - 1
                                 : resolve_n_max(beta.magnitude(), opt);
  const Complex mia = Complex(0, -1) * alpha.amplitude;
  const Complex mib = Complex(0, -1) * beta.amplitude;

  HybridState cv = input ? *input
                         : entangled_coherent_state(CoherentLabel(mia), CoherentLabel(mib), -1.0,
                                                    n_a, n_b, opt);
  require_two_mode_span(cv, {CoherentLabel(mia), CoherentLabel(-mia)},
                        {CoherentLabel(mib), CoherentLabel(-mib)}, "reciprocation");

  HybridState state = tensor(
      tensor(qubit_state(kInvSqrt2, kInvSqrt2), qubit_state(kInvSqrt2, kInvSqrt2)), cv);
  const int pair_1a[] = {0, 2}, pair_2b[] = {1, 3};
  state = apply(dispersive_propagator({kPi / 2, -1}, n_a).matrix, pair_1a, state);
  state = apply(dispersive_propagator({kPi / 2, +1}, n_b).matrix, pair_2b, state);

  const HybridState target = bell_psi_plus();
  ProtocolReport rep{"reciprocation", {}, {}};

  if (mode == ReciprocationMode::Ideal) {
    const int q2[] = {1};
    const std::vector<CoherentLabel> cands_a{alpha, CoherentLabel(-alpha.amplitude)};
    const std::vector<CoherentLabel> cands_b{beta, CoherentLabel(-beta.amplitude)};
    for (BranchOutcome& ma : ideal_phase_projection(state, 2, cands_a)) {
      if (!ma.state) {
        for (const char* sb : {"+", "-"})
          rep.branches.push_back({"(" + std::string(ma.label == "0" ? "+" : "-") + "," + sb + ")",
                                  0.0, true, {}, {}, {}, {}, {}});
        continue;
      }
      for (BranchOutcome& mb : ideal_phase_projection(*ma.state, 2, cands_b)) {
        ProtocolBranch br;
        br.label = "(" + std::string(ma.label == "0" ? "+" : "-") + "," +
                   (mb.label == "0" ? "+" : "-") + ")";
        br.probability = ma.probability * mb.probability;
        if (mb.state) {
          HybridState atoms = *mb.state;
          // Mismatched phases: conditional sigma_y on atom 2.
          if (ma.label != mb.label) atoms = apply(sigma_y(), q2, atoms);
          br.fidelity = target.fidelity(atoms);
          br.vne_bits = entropy_keeping(atoms, {0});
          br.purity = 1.0;
          br.state = std::move(atoms);
        }
        rep.branches.push_back(std::move(br));
      }
    }
  } else {
    const GaussianMeasurementResult res =
        gaussian_cv_measurement(state, GaussianPovm{alpha, beta, width});
    ProtocolBranch br;
    br.label = "(alpha-center,beta-center)";
    br.probability = res.event_weight;
    br.vne_bits = von_neumann_entropy(res.rho12);
    br.fidelity = res.fidelity;
    br.purity = res.rho12.purity();
    br.density = res.rho12;
    rep.branches.push_back(std::move(br));
    rep.branches.push_back({"complement", 1.0 - res.event_weight, false, {}, {}, {}, {}, {}});

    rep.diagnostics["p1"] = res.p1;
    rep.diagnostics["p2"] = res.p2;
    rep.diagnostics["p3"] = res.p3;
    rep.diagnostics["p1_closed"] = res.p1_closed;
    rep.diagnostics["p2_closed"] = res.p2_closed;
    rep.diagnostics["fidelity_closed"] = res.fidelity_closed;
    rep.diagnostics["fidelity_quadrature"] = res.fidelity;
    rep.diagnostics["quadrature_error"] = res.quadrature_error;
    rep.diagnostics["out_of_block_weight"] = res.out_of_block_weight;
  }
  add_common_diagnostics(rep, std::max(alpha.magnitude(), beta.magnitude()),
                         std::max(n_a, n_b), opt);
  return rep;
}

namespace {

std::vector<CoherentLabel> multipair_components(int n, CoherentLabel alpha) {
  // Mode-a rotation for set-1 digit pattern d: theta(d) = sum_k (1-2 d_k) pi/2^k.
  std::vector<CoherentLabel> comps;
  for (int d = 0; d < (1 << n); ++d) {
    double theta = 0.0;
    for (int k = 1; k <= n; ++k) {
      const int bit = (d >> (n - k)) & 1;
      theta += (1 - 2 * bit) * kPi / (1 << k);
    }
    comps.emplace_back(alpha.amplitude * std::exp(Complex(0, theta)));
  }
  return comps;
}

void check_pair_count(int n) {
  if (n < 1) throw PreconditionError("multipair: n must be at least 1");
  if (n > 3)
    throw PreconditionError("multipair: n above the documented truncation budget (n <= 3)");
}

HybridState multipair_initial_atoms(int n) {
  // |psi_+>^{(x) n} = 2^{-n/2} sum_d |d>_{set1} |d^c>_{set2}
  const int mask = (1 << n) - 1;
  Vector amps = Vector::Zero(1L << (2 * n));
  const double w = std::pow(2.0, -0.5 * n);
  for (int d = 0; d <= mask; ++d) amps((static_cast<long>(d) << n) | (d ^ mask)) = w;
  return HybridState(RegisterLayout::qubits(2 * n), amps);
}

}  // namespace

ProtocolReport multipair_transfer(int n, CoherentLabel alpha, const std::string& outcomes,
                                  const ProtocolOptions& opt) {
  check_pair_count(n);
  if (static_cast<int>(outcomes.size()) != 2 * n ||
      outcomes.find_first_not_of("+-") != std::string::npos)
    throw PreconditionError("multipair_transfer: outcome string must be 2n characters of +/-");
  const int n_max = resolve_n_max(alpha.magnitude(), opt);

  HybridState state = tensor(tensor(multipair_initial_atoms(n), make_coherent(alpha, n_max, opt)),
                             make_coherent(alpha, n_max, opt));
  for (int k = 1; k <= n; ++k) {
    const double phi = kPi / (1 << k);
    const int pair_a[] = {k - 1, 2 * n};
    const int pair_b[] = {n + k - 1, 2 * n + 1};
    state = apply(dispersive_propagator({phi, +1}, n_max).matrix, pair_a, state);
    state = apply(dispersive_propagator({phi, -1}, n_max).matrix, pair_b, state);
  }

  // Measure all atoms in |+->, keeping the full branch tree.
  struct Leaf {
    std::string label;
    double probability;
    std::optional<HybridState> state;
  };
  std::vector<Leaf> leaves{{"", 1.0, state}};
  for (int q = 0; q < 2 * n; ++q) {
    std::vector<Leaf> next;
    for (Leaf& leaf : leaves) {
      if (!leaf.state) {
        next.push_back({leaf.label + "+", 0.0, {}});
        next.push_back({leaf.label + "-", 0.0, {}});
        continue;
      }
      for (BranchOutcome& m : project_atom(*leaf.state, 0, AtomAxis::X))
        next.push_back({leaf.label + m.label, leaf.probability * m.probability,
                        std::move(m.state)});
    }
    leaves = std::move(next);
  }

  const std::vector<CoherentLabel> comps = multipair_components(n, alpha);
  const Matrix iso = coherent_span_isometry(comps, n_max);

  ProtocolReport rep{"multipair-transfer", {}, {}};
  for (Leaf& leaf : leaves) {
    ProtocolBranch br;
    br.label = leaf.label;
    br.probability = leaf.probability;
    br.kept = leaf.label == outcomes;
    if (br.kept && leaf.state) {
      const EmbeddedTwoMode emb = project_two_mode(*leaf.state, iso, iso);
      rep.diagnostics["embedding_residual"] = emb.residual;
      br.vne_bits = schmidt_entropy(emb.coefficients);
      br.purity = 1.0;
      br.state = std::move(leaf.state);
    }
    rep.branches.push_back(std::move(br));
  }
  rep.diagnostics["component_resolvability"] =
      alpha.magnitude() * std::sin(kPi / (1 << n));
  add_common_diagnostics(rep, alpha.magnitude(), n_max, opt);
  return rep;
}

ProtocolReport multipair_reciprocation(int n, CoherentLabel alpha,
                                       const std::optional<HybridState>& input,
                                       const ProtocolOptions& opt) {
  check_pair_count(n);
  const bool sized_by_input = input && input->layout().qubit_count() == 0 &&
                              input->layout().mode_count() == 2;
  const int n_max = sized_by_input ? input->layout().subsystem_dim(0) - 1
                                   : resolve_n_max(alpha.magnitude(), opt);
  const std::vector<CoherentLabel> comps = multipair_components(n, alpha);

  HybridState cv = [&] {
    if (input) return *input;
    const std::string all_plus(2 * n, '+');
    ProtocolReport transfer = multipair_transfer(n, alpha, all_plus, opt);
    for (ProtocolBranch& b : transfer.branches)
      if (b.kept && b.state) return std::move(*b.state);
    throw PreconditionError("multipair_reciprocation: transfer produced no usable branch");
  }();
  require_two_mode_span(cv, comps, comps, "multipair_reciprocation");

  Vector plus = Vector::Constant(1L << (2 * n), std::pow(2.0, -static_cast<double>(n)));
  HybridState state = tensor(HybridState(RegisterLayout::qubits(2 * n), plus), cv);
  for (int k = 1; k <= n; ++k) {
    const double phi = kPi / (1 << k);
    const int pair_a[] = {k - 1, 2 * n};
    const int pair_b[] = {n + k - 1, 2 * n + 1};
    // Opposite interaction signs relative to the transfer step.
    state = apply(dispersive_propagator({phi, -1}, n_max).matrix, pair_a, state);
    state = apply(dispersive_propagator({phi, +1}, n_max).matrix, pair_b, state);
  }

  // Candidate set after the reversed pattern: relative rotations are the
  // differences of the transfer phases, 2^n angles spaced pi/2^{n-1};
  // success means both modes back at the m = 0 candidate |alpha>.
  std::vector<CoherentLabel> cands;
  for (int m = 0; m < (1 << n); ++m)
    cands.emplace_back(alpha.amplitude * std::exp(Complex(0, kPi * m / (1 << (n - 1)))));

  ProtocolReport rep{"multipair-reciprocation", {}, {}};
  std::vector<BranchOutcome> proj_a = ideal_phase_projection(state, 2 * n, cands);
  double success_p = 0.0;
  std::optional<HybridState> success_state;
  double off_success = 0.0;
  for (BranchOutcome& ma : proj_a) {
    if (ma.label != "0" || !ma.state) {
      off_success += ma.probability;
      continue;
    }
    for (BranchOutcome& mb : ideal_phase_projection(*ma.state, 2 * n, cands)) {
      if (mb.label != "0" || !mb.state) {
        off_success += ma.probability * mb.probability;
        continue;
      }
      success_p = ma.probability * mb.probability;
      success_state = std::move(mb.state);
    }
  }

  const HybridState target = multipair_initial_atoms(n);
  ProtocolBranch br;
  br.label = "(alpha,alpha)";
  br.probability = success_p;
  if (success_state) {
    br.fidelity = target.fidelity(*success_state);
    std::vector<int> set1(n);
    for (int k = 0; k < n; ++k) set1[k] = k;
    br.vne_bits = von_neumann_entropy(partial_trace(*success_state, set1));
    br.purity = 1.0;
    br.state = std::move(success_state);
  }
  rep.branches.push_back(std::move(br));
  rep.branches.push_back({"other", off_success, false, {}, {}, {}, {}, {}});
  rep.diagnostics["success_probability"] = success_p;
  add_common_diagnostics(rep, alpha.magnitude(), n_max, opt);
  return rep;
}

ProtocolReport entanglement_swap(CoherentLabel alpha, const std::optional<HybridState>& cv_input,
                                 const ProtocolOptions& opt) {
  const bool sized_by_input = cv_input && cv_input->layout().qubit_count() == 0 &&
                              cv_input->layout().mode_count() == 2;
  const int n_a = sized_by_input ? cv_input->layout().subsystem_dim(0) - 1
                                 : resolve_n_max(alpha.magnitude(), opt);
  // Mode b needs headroom for the homodyne displacement |i alpha| + |i alpha|.
  const int n_b = sized_by_input ? cv_input->layout().subsystem_dim(1) - 1
                                 : resolve_n_max(2.0 * alpha.magnitude(), opt);
  const CoherentLabel minus_alpha(-alpha.amplitude);

  HybridState cv = cv_input ? *cv_input
                            : entangled_coherent_state(alpha, alpha, -1.0, n_a, n_b, opt);
  require_two_mode_span(cv, {alpha, minus_alpha}, {alpha, minus_alpha}, "entanglement_swap");

  HybridState state = tensor(bell_psi_plus(), cv);
  const int pair_2b[] = {1, 3};
  state = apply(dispersive_propagator({kPi / 2, +1}, n_b).matrix, pair_2b, state);

  const Complex ia = Complex(0, 1) * alpha.amplitude;

  // Homodyne discrimination diagnostics on the two phase hypotheses. The
  // vacuum branch leaves the probe grounded with probability exactly 1.
  const JCParams probe{0.0, 1.0, kPi};
  const HomodyneResult h_bright =
      homodyne_phase_discriminator(make_coherent(CoherentLabel(ia), n_b, opt), 0, alpha, probe);
  const HomodyneResult h_vacuum =
      homodyne_phase_discriminator(make_coherent(CoherentLabel(-ia), n_b, opt), 0, alpha, probe);

  // Target form (|g,alpha> + |e,-alpha>)/norm on (qubit 1, mode a).
  const HybridState target =
      superpose(1.0, tensor(qubit_state(1.0, 0.0), make_coherent(alpha, n_a, opt)), 1.0,
                tensor(qubit_state(0.0, 1.0), make_coherent(minus_alpha, n_a, opt)))
          .normalized();

  ProtocolReport rep{"entanglement-swap", {}, {}};
  const int q0[] = {0};
  for (BranchOutcome& mb : ideal_phase_projection(
           state, 3, {CoherentLabel(ia), CoherentLabel(-ia)})) {
    const std::string phase_label = mb.label == "0" ? "+ia" : "-ia";
    if (!mb.state) {
      for (const char* sy : {"+", "-"})
        rep.branches.push_back({"(" + phase_label + "," + sy + ")", 0.0, true, {}, {}, {}, {}, {}});
      continue;
    }
    for (BranchOutcome& my : project_atom(*mb.state, 1, AtomAxis::Y)) {
      ProtocolBranch br;
      br.label = "(" + phase_label + "," + my.label + ")";
      br.probability = mb.probability * my.probability;
      if (my.state) {
        const Matrix correction = align_qubit(*my.state, target);
        HybridState final_state = apply(correction, q0, *my.state);
        br.fidelity = target.fidelity(final_state);
        br.vne_bits = entropy_keeping(final_state, {0});
        br.purity = 1.0;
        br.state = std::move(final_state);
      }
      rep.branches.push_back(std::move(br));
    }
  }
  rep.diagnostics["homodyne_ground_prob_bright"] = h_bright.ground_probability;
  rep.diagnostics["homodyne_ground_prob_vacuum"] = h_vacuum.ground_probability;
  add_common_diagnostics(rep, alpha.magnitude(), n_b, opt);
  return rep;
}

}  // namespace ckqed
