#include "ckqed/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace ckqed {
namespace {

// Offsets of every digit combination of the given subsystems, in row-major
// order of the subsystem list.
std::vector<long> subsystem_offsets(const RegisterLayout& layout, std::span<const int> subs) {
  const auto strides = layout.strides();
  std::vector<long> offsets{0};
  for (int s : subs) {
    layout.check_subsystem(s);
    const int d = layout.subsystem_dim(s);
    std::vector<long> next;
    next.reserve(offsets.size() * d);
    for (long base : offsets)
      for (int k = 0; k < d; ++k) next.push_back(base + k * strides[s]);
    offsets = std::move(next);
  }
  return offsets;
}

std::vector<int> complement_subsystems(const RegisterLayout& layout, std::span<const int> subs) {
  std::vector<bool> used(layout.subsystem_count(), false);
  for (int s : subs) {
    layout.check_subsystem(s);
    if (used[s]) throw PreconditionError("duplicate subsystem index");
    used[s] = true;
  }
  std::vector<int> rest;
  for (int s = 0; s < layout.subsystem_count(); ++s)
    if (!used[s]) rest.push_back(s);
  return rest;
}

}  // namespace

double coherent_truncation_loss(CoherentLabel alpha, int n_max) {
  if (n_max < 0) throw PreconditionError("n_max must be non-negative");
  const double x = alpha.magnitude() * alpha.magnitude();
  double term = std::exp(-x);  // n = 0
  double kept = term;
  for (int n = 1; n <= n_max; ++n) {
    term *= x / n;
    kept += term;
  }
  return std::max(0.0, 1.0 - kept);
}

HybridState coherent_state(CoherentLabel alpha, int n_max, bool allow_low_truncation) {
  if (n_max < 0) throw PreconditionError("n_max must be non-negative");
  if (!allow_low_truncation && n_max < default_n_max(alpha.magnitude()))
    throw PreconditionError("n_max below the truncation rule for |alpha|; pass the override to force");
  Vector amps(n_max + 1);
  // e^{-|a|^2/2} a^n / sqrt(n!) built up iteratively to avoid factorials.
  Complex c = std::exp(-0.5 * std::norm(alpha.amplitude));
  amps(0) = c;
  for (int n = 1; n <= n_max; ++n) {
    c *= alpha.amplitude / std::sqrt(static_cast<double>(n));
    amps(n) = c;
  }
  return HybridState(RegisterLayout::single_mode(n_max), amps).normalized();
}

Matrix displacement(CoherentLabel beta, int n_max, double acting_magnitude,
                    bool allow_low_truncation) {
  if (n_max < 0) throw PreconditionError("n_max must be non-negative");
  if (!allow_low_truncation && n_max < default_n_max(beta.magnitude() + acting_magnitude))
    throw PreconditionError("n_max below the truncation rule for |beta| plus the acting amplitude");
  const int d = n_max + 1;
  // beta a^dag - conj(beta) a is anti-Hermitian; exponentiate through the
  // Hermitian -i(beta a^dag - conj(beta) a).
  Matrix h = Matrix::Zero(d, d);
  for (int n = 0; n < d - 1; ++n) {
    const double ladder = std::sqrt(static_cast<double>(n + 1));
    h(n + 1, n) = Complex(0, -1) * beta.amplitude * ladder;
    h(n, n + 1) = std::conj(h(n + 1, n));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd w = es.eigenvalues();
  Vector phases(d);
  for (int k = 0; k < d; ++k) phases(k) = std::exp(Complex(0, w(k)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

HybridState qubit_state(Complex g_amp, Complex e_amp) {
  Vector amps(2);
  amps(0) = g_amp;
  amps(1) = e_amp;
  return HybridState(RegisterLayout::qubits(1), amps);
}

HybridState tensor(const HybridState& u, const HybridState& v) {
  const RegisterLayout& lu = u.layout();
  const RegisterLayout& lv = v.layout();
  std::vector<int> modes = lu.mode_n_max();
  modes.insert(modes.end(), lv.mode_n_max().begin(), lv.mode_n_max().end());
  RegisterLayout out(lu.qubit_count() + lv.qubit_count(), std::move(modes));

  // Naive concatenation order is (u subsystems, v subsystems); the canonical
  // order interleaves to put all qubits first.
  const int nu = lu.subsystem_count();
  const int nv = lv.subsystem_count();
  std::vector<int> canon_source;  // canonical slot -> naive slot
  for (int s = 0; s < lu.qubit_count(); ++s) canon_source.push_back(s);
  for (int s = 0; s < lv.qubit_count(); ++s) canon_source.push_back(nu + s);
  for (int s = lu.qubit_count(); s < nu; ++s) canon_source.push_back(s);
  for (int s = lv.qubit_count(); s < nv; ++s) canon_source.push_back(nu + s);

  const auto out_strides = out.strides();
  std::vector<int> du(nu), dv(nv);
  Vector amps(out.total_dim());
  for (long iu = 0; iu < lu.total_dim(); ++iu) {
    lu.digits_of(iu, du);
    for (long iv = 0; iv < lv.total_dim(); ++iv) {
      lv.digits_of(iv, dv);
      long idx = 0;
      for (int slot = 0; slot < nu + nv; ++slot) {
        const int src = canon_source[slot];
        const int digit = src < nu ? du[src] : dv[src - nu];
        idx += digit * out_strides[slot];
      }
      amps(idx) = u.amplitudes()(iu) * v.amplitudes()(iv);
    }
  }
  return HybridState(out, std::move(amps));
}

HybridState superpose(Complex c1, const HybridState& u, Complex c2, const HybridState& v) {
  if (!(u.layout() == v.layout())) throw PreconditionError("layout mismatch");
  return HybridState(u.layout(), c1 * u.amplitudes() + c2 * v.amplitudes());
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix embed(const Matrix& op, std::span<const int> targets, const RegisterLayout& layout) {
  const auto target_offsets = subsystem_offsets(layout, targets);
  const long dt = static_cast<long>(target_offsets.size());
  if (op.rows() != dt || op.cols() != dt)
    throw PreconditionError("operator dimension does not match target subsystems");
  const auto rest = complement_subsystems(layout, targets);
  const auto rest_offsets = subsystem_offsets(layout, rest);

  const long dim = layout.total_dim();
  Matrix out = Matrix::Zero(dim, dim);
  for (long base : rest_offsets)
    for (long r = 0; r < dt; ++r)
      for (long c = 0; c < dt; ++c)
        out(base + target_offsets[r], base + target_offsets[c]) = op(r, c);
  return out;
}

HybridState apply(const Matrix& op, std::span<const int> targets, const HybridState& state) {
  const RegisterLayout& layout = state.layout();
  const auto target_offsets = subsystem_offsets(layout, targets);
  const long dt = static_cast<long>(target_offsets.size());
  if (op.rows() != dt || op.cols() != dt)
    throw PreconditionError("operator dimension does not match target subsystems");
  const auto rest = complement_subsystems(layout, targets);
  const auto rest_offsets = subsystem_offsets(layout, rest);

  Vector out(layout.total_dim());
  Vector slice(dt);
  for (long base : rest_offsets) {
    for (long k = 0; k < dt; ++k) slice(k) = state.amplitudes()(base + target_offsets[k]);
    const Vector mapped = op * slice;
    for (long k = 0; k < dt; ++k) out(base + target_offsets[k]) = mapped(k);
  }
  return HybridState(layout, std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep) {
  if (keep.empty()) throw PreconditionError("keep set must be nonempty");
  const RegisterLayout& layout = rho.layout();
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw PreconditionError("duplicate subsystem index in keep set");

  const auto keep_offsets = subsystem_offsets(layout, kept);
  const auto traced = complement_subsystems(layout, kept);
  const auto trace_offsets = subsystem_offsets(layout, traced);

  int out_qubits = 0;
  std::vector<int> out_modes;
  for (int s : kept) {
    if (layout.is_qubit(s))
      ++out_qubits;
    else
      out_modes.push_back(layout.subsystem_dim(s) - 1);
  }
  RegisterLayout out_layout(out_qubits, std::move(out_modes));

  const long dk = static_cast<long>(keep_offsets.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (long t : trace_offsets)
    for (long i = 0; i < dk; ++i)
      for (long j = 0; j < dk; ++j)
        out(i, j) += rho.matrix()(t + keep_offsets[i], t + keep_offsets[j]);
  return DensityOperator(out_layout, std::move(out));
}

HybridState project_out(const Vector& ket, int subsystem, const HybridState& state) {
  const RegisterLayout& layout = state.layout();
  layout.check_subsystem(subsystem);
  const int ds = layout.subsystem_dim(subsystem);
  if (ket.size() != ds) throw PreconditionError("ket dimension does not match subsystem");
  const long stride = layout.strides()[subsystem];
  const int subs[] = {subsystem};
  const auto rest = complement_subsystems(layout, subs);
  const auto rest_offsets = subsystem_offsets(layout, rest);

  Vector out(static_cast<long>(rest_offsets.size()));
  for (size_t r = 0; r < rest_offsets.size(); ++r) {
    Complex acc = 0.0;
    for (int k = 0; k < ds; ++k)
      acc += std::conj(ket(k)) * state.amplitudes()(rest_offsets[r] + k * stride);
    out(static_cast<long>(r)) = acc;
  }
  return HybridState(layout.without(subsystem), std::move(out));
}

DensityOperator partial_trace(const HybridState& psi, std::span<const int> keep) {
  // For a pure state, reduce without forming the full density matrix.
  if (keep.empty()) throw PreconditionError("keep set must be nonempty");
  const RegisterLayout& layout = psi.layout();
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw PreconditionError("duplicate subsystem index in keep set");

  const auto keep_offsets = subsystem_offsets(layout, kept);
  const auto traced = complement_subsystems(layout, kept);
  const auto trace_offsets = subsystem_offsets(layout, traced);

  int out_qubits = 0;
  std::vector<int> out_modes;
  for (int s : kept) {
    if (layout.is_qubit(s))
      ++out_qubits;
    else
      out_modes.push_back(layout.subsystem_dim(s) - 1);
  }
  RegisterLayout out_layout(out_qubits, std::move(out_modes));

  const long dk = static_cast<long>(keep_offsets.size());
  Matrix coeff(dk, static_cast<long>(trace_offsets.size()));
  for (long i = 0; i < dk; ++i)
    for (size_t t = 0; t < trace_offsets.size(); ++t)
      coeff(i, static_cast<long>(t)) = psi.amplitudes()(keep_offsets[i] + trace_offsets[t]);
  Matrix out = coeff * coeff.adjoint();
  return DensityOperator(out_layout, std::move(out));
}

}  // namespace ckqed
