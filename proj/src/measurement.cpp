#include "ckqed/measurement.hpp"

#include <cmath>
#include <sstream>

#include "ckqed/entanglement.hpp"
#include "ckqed/hilbert.hpp"

namespace ckqed {
namespace {

constexpr double kPi = 3.14159265358979323846;

void require_normalized(const HybridState& s, const char* op) {
  if (std::abs(s.squared_norm() - 1.0) > 1e-8)
    throw PreconditionError(std::string(op) + ": input state is not normalized");
}

Vector atom_eigenvector(AtomAxis axis, int which) {
  // Digit convention: index 0 = |g>, index 1 = |e>.
  const double r = 1.0 / std::sqrt(2.0);
  Vector v(2);
  switch (axis) {
    case AtomAxis::X:
      v << r, (which == 0 ? r : -r);
      break;
    case AtomAxis::Y:
      v << r, (which == 0 ? Complex(0, r) : Complex(0, -r));
      break;
    case AtomAxis::Z:
      if (which == 0)
        v << 0, 1;  // |e>
      else
        v << 1, 0;  // |g>
      break;
  }
  return v;
}

std::string atom_label(AtomAxis axis, int which) {
  if (axis == AtomAxis::Z) return which == 0 ? "e" : "g";
  return which == 0 ? "+" : "-";
}

// Fock amplitudes <n|mu> for real mu.
Eigen::VectorXd real_fock_amplitudes(double mu, int n_max) {
  Eigen::VectorXd f(n_max + 1);
  f(0) = std::exp(-0.5 * mu * mu);
  for (int n = 1; n <= n_max; ++n) f(n) = f(n - 1) * mu / std::sqrt(static_cast<double>(n));
  return f;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

// K_{mm'} = integral of G_mu(width, center) <m|mu><mu|m'> over the real line.
// Composite Gauss-Legendre over [center - 8 sqrt(w), center + 8 sqrt(w)],
// panel count doubled until the entrywise change drops below tol.
Eigen::MatrixXd gaussian_kernel(double center, double width, int n_max, double tol,
                                double* error_estimate) {
  const int d = n_max + 1;
  if (width == 0.0) {
    const Eigen::VectorXd f = real_fock_amplitudes(center, n_max);
    if (error_estimate) *error_estimate = 0.0;
    return f * f.transpose();
  }
  const double half_window = 8.0 * std::sqrt(width);
  const double lo = center - half_window;
  const double hi = center + half_window;
  std::vector<double> gl_x, gl_w;
  gauss_legendre(16, gl_x, gl_w);

  auto integrate = [&](int panels) {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(d, d);
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = lo + p * h;
      for (size_t q = 0; q < gl_x.size(); ++q) {
        const double mu = a + 0.5 * h * (gl_x[q] + 1.0);
        const double g = std::exp(-(mu - center) * (mu - center) / (2.0 * width)) /
                         std::sqrt(2.0 * kPi * width);
        const Eigen::VectorXd f = real_fock_amplitudes(mu, n_max);
        k.noalias() += (0.5 * h * gl_w[q] * g) * (f * f.transpose());
      }
    }
    return k;
  };

  Eigen::MatrixXd prev = integrate(8);
  for (int panels = 16; panels <= 1024; panels *= 2) {
    Eigen::MatrixXd cur = integrate(panels);
    const double err = (cur - prev).cwiseAbs().maxCoeff();
    if (err <= tol) {
      if (error_estimate) *error_estimate = err;
      return cur;
    }
    prev = std::move(cur);
  }
  throw ToleranceError("gaussian_cv_measurement: kernel quadrature did not converge");
}

}  // namespace

std::vector<BranchOutcome> project_atom(const HybridState& state, int atom, AtomAxis axis) {
  const RegisterLayout& layout = state.layout();
  layout.check_subsystem(atom);
  if (!layout.is_qubit(atom)) throw PreconditionError("project_atom target is not a qubit");
  require_normalized(state, "project_atom");

  std::vector<BranchOutcome> branches;
  for (int which = 0; which < 2; ++which) {
    const HybridState reduced = project_out(atom_eigenvector(axis, which), atom, state);
    const double p = reduced.squared_norm();
    BranchOutcome b;
    b.label = atom_label(axis, which);
    b.probability = p;
    if (p > 1e-300) b.state = reduced.normalized();
    branches.push_back(std::move(b));
  }
  return branches;
}

std::vector<BranchOutcome> ideal_phase_projection(const HybridState& state, int mode,
                                                  const std::vector<CoherentLabel>& candidates,
                                                  double residual_bound) {
  const RegisterLayout& layout = state.layout();
  layout.check_subsystem(mode);
  if (layout.is_qubit(mode)) throw PreconditionError("ideal_phase_projection target is not a mode");
  if (candidates.empty()) throw PreconditionError("empty candidate set");
  require_normalized(state, "ideal_phase_projection");
  const int n_max = layout.subsystem_dim(mode) - 1;

  // Support check: weight of the mode outside the candidate span.
  const int keep[] = {mode};
  const DensityOperator reduced = partial_trace(state, keep);
  const Matrix iso = coherent_span_isometry(candidates, n_max);
  const double in_span = (iso.adjoint() * reduced.matrix() * iso).trace().real();
  const double residual = 1.0 - in_span;
  if (residual > residual_bound) {
    std::ostringstream msg;
    msg << "ideal_phase_projection: mode support outside the candidate span (residual "
        << residual << " > bound " << residual_bound << ")";
    throw PreconditionError(msg.str());
  }

  std::vector<double> weights(candidates.size());
  std::vector<HybridState> states;
  states.reserve(candidates.size());
  double total = 0.0;
  for (size_t k = 0; k < candidates.size(); ++k) {
    HybridState proj = project_out(coherent_state(candidates[k], n_max, true).amplitudes(),
                                   mode, state);
    weights[k] = proj.squared_norm();
    total += weights[k];
    states.push_back(std::move(proj));
  }
  if (total <= 0.0) throw PreconditionError("all candidate projections vanish");

  std::vector<BranchOutcome> branches;
  for (size_t k = 0; k < candidates.size(); ++k) {
    BranchOutcome b;
    b.label = std::to_string(k);
    b.probability = weights[k] / total;
    // Weights this far below the dominant one sit beneath the contraction
    // noise floor; report them as exact zeros.
    if (b.probability < 1e-18) b.probability = 0.0;
    if (b.probability > 0.0) b.state = states[k].normalized();
    branches.push_back(std::move(b));
  }
  return branches;
}

GaussianMeasurementResult gaussian_cv_measurement(const HybridState& state,
                                                  const GaussianPovm& povm, double abs_tol) {
  const RegisterLayout& layout = state.layout();
  if (layout.qubit_count() != 2 || layout.mode_count() != 2)
    throw PreconditionError("gaussian_cv_measurement expects two qubits and two modes");
  require_normalized(state, "gaussian_cv_measurement");
  if (povm.width < 0.0) throw PreconditionError("negative Gaussian width");
  if (std::abs(povm.center_a.amplitude.imag()) > 1e-12 ||
      std::abs(povm.center_b.amplitude.imag()) > 1e-12)
    throw PreconditionError("gaussian_cv_measurement assumes real centers");

  const double alpha = povm.center_a.amplitude.real();
  const double beta = povm.center_b.amplitude.real();
  const double width = povm.width;
  const long da = layout.subsystem_dim(2);
  const long db = layout.subsystem_dim(3);

  const double kernel_tol = std::min(abs_tol * 1e-3, 1e-9);
  double err_a = 0.0, err_b = 0.0;
  const Matrix ka =
      gaussian_kernel(alpha, width, static_cast<int>(da) - 1, kernel_tol, &err_a).cast<Complex>();
  const Matrix kb =
      gaussian_kernel(beta, width, static_cast<int>(db) - 1, kernel_tol, &err_b).cast<Complex>();

  // rho_raw(qq') = sum_{mnm'n'} psi_{qmn} Ka_{mm'} Kb_{nn'} conj(psi_{q'm'n'})
  // The (gamma, delta) double integral factorizes into the two mode kernels.
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Matrix rho_raw(4, 4);
  std::vector<Matrix> mapped(4);
  for (int q = 0; q < 4; ++q) {
    Eigen::Map<const RowMajor> psi_q(state.amplitudes().data() + q * da * db, da, db);
    mapped[q] = ka * psi_q * kb;
  }
  for (int r = 0; r < 4; ++r) {
    Eigen::Map<const RowMajor> psi_r(state.amplitudes().data() + r * da * db, da, db);
    for (int q = 0; q < 4; ++q)
      rho_raw(q, r) = (mapped[q].array() * psi_r.conjugate().array()).sum();
  }

  const double event_weight = rho_raw.trace().real();
  if (event_weight <= 0.0)
    throw ToleranceError("gaussian_cv_measurement: vanishing outcome weight");
  Matrix rho12_m = rho_raw / event_weight;
  rho12_m = 0.5 * (rho12_m + rho12_m.adjoint().eval());

  Vector phi_minus(4), psi_plus(4);
  const double r2 = 1.0 / std::sqrt(2.0);
  phi_minus << r2, 0, 0, -r2;  // (|gg> - |ee>)/sqrt2, digits g=0,e=1
  psi_plus << 0, r2, r2, 0;    // (|ge> + |eg>)/sqrt2

  // Rescale the quadrature weights to the normalization in which the
  // pre-measurement four-component state enters unnormalized.
  const double rescale = 4.0 * (1.0 - std::exp(-2.0 * (alpha * alpha + beta * beta)));

  GaussianMeasurementResult out{DensityOperator(RegisterLayout::qubits(2), rho12_m)};
  out.p1 = (phi_minus.dot(rho_raw * phi_minus)).real() * rescale;
  out.p2 = (psi_plus.dot(rho_raw * psi_plus)).real() * rescale;
  out.p3 = (Complex(0, 1) * phi_minus.dot(rho_raw * psi_plus)).real() * rescale;

  const double s = 1.0 + 2.0 * width;
  out.p1_closed = (std::exp(-4.0 * alpha * alpha / s) + std::exp(-4.0 * beta * beta / s) -
                   2.0 * std::exp(-2.0 * (1.0 + width) * (alpha * alpha + beta * beta) / s)) / s;
  out.p2_closed = (1.0 + std::exp(-4.0 * (alpha * alpha + beta * beta) / s) -
                   2.0 * std::exp(-2.0 * (1.0 + width) * (alpha * alpha + beta * beta) / s)) / s;

  out.fidelity = state_fidelity(out.rho12, HybridState(RegisterLayout::qubits(2), psi_plus));
  out.fidelity_closed = out.p2_closed / (out.p1_closed + out.p2_closed);
  out.event_weight = event_weight;
  out.quadrature_error = std::max(err_a, err_b);
  out.out_of_block_weight =
      1.0 - (phi_minus.dot(rho12_m * phi_minus)).real() - (psi_plus.dot(rho12_m * psi_plus)).real();
  return out;
}

HomodyneResult homodyne_phase_discriminator(const HybridState& state, int mode,
                                            CoherentLabel alpha, const JCParams& probe) {
  const RegisterLayout& layout = state.layout();
  layout.check_subsystem(mode);
  if (layout.is_qubit(mode)) throw PreconditionError("homodyne target is not a mode");
  if (std::abs(probe.delta) > 1e-12 * std::max(1.0, probe.lambda))
    throw PreconditionError("homodyne probe interaction must be resonant (delta = 0)");
  require_normalized(state, "homodyne_phase_discriminator");
  const int n_max = layout.subsystem_dim(mode) - 1;

  const Complex i_alpha = Complex(0, 1) * alpha.amplitude;
  // Support must lie on the {|i alpha>, |-i alpha>} pair; at alpha = 0 the
  // pair degenerates to the vacuum alone.
  std::vector<CoherentLabel> pair{CoherentLabel(i_alpha)};
  if (alpha.magnitude() > 1e-9) pair.emplace_back(-i_alpha);
  {
    const int keep[] = {mode};
    const DensityOperator reduced = partial_trace(state, keep);
    const Matrix iso = coherent_span_isometry(pair, n_max);
    const double residual = 1.0 - (iso.adjoint() * reduced.matrix() * iso).trace().real();
    if (residual > 1e-6) {
      std::ostringstream msg;
      msg << "homodyne_phase_discriminator: mode support outside {|i a>, |-i a>} (residual "
          << residual << ")";
      throw PreconditionError(msg.str());
    }
  }

  // D(i alpha): |-i alpha> -> |0>, |i alpha> -> |2 i alpha>.
  const Matrix d = displacement(CoherentLabel(i_alpha), n_max, alpha.magnitude());
  const int mode_targets[] = {mode};
  HybridState displaced = apply(d, mode_targets, state);

  HybridState joint = tensor(displaced, qubit_state(1.0, 0.0));
  const int probe_qubit = layout.qubit_count();  // appended after existing qubits
  const int shifted_mode = mode + 1;

  const Propagator jc = exact_jc_propagator(probe, n_max);
  const int jc_targets[] = {probe_qubit, shifted_mode};
  joint = apply(jc.matrix, jc_targets, joint);

  HomodyneResult result;
  result.branches = project_atom(joint, probe_qubit, AtomAxis::Z);
  for (const BranchOutcome& b : result.branches)
    if (b.label == "g") result.ground_probability = b.probability;
  return result;
}

}  // namespace ckqed
