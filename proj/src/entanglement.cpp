#include "ckqed/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include "ckqed/hilbert.hpp"

namespace ckqed {
namespace {

constexpr double kPi = 3.14159265358979323846;

double mod_2pi(double x) {
  const double two_pi = 2.0 * kPi;
  double r = std::fmod(x, two_pi);
  if (r < 0) r += two_pi;
  return r;
}

// Distance of x from 0 modulo 2*pi.
double phase_distance(double x) {
  const double r = mod_2pi(x);
  return std::min(r, 2.0 * kPi - r);
}

}  // namespace

Matrix CoherentQubitBasis::isometry() const {
  Matrix v(psi_plus.amplitudes().size(), 2);
  v.col(0) = psi_plus.amplitudes();
  v.col(1) = psi_minus.amplitudes();
  return v;
}

CoherentQubitBasis coherent_qubit_basis(CoherentLabel alpha, CoherentLabel beta, int n_max) {
  const Complex ov = coherent_overlap(alpha, beta);
  const double s = std::abs(ov);
  if (s >= 1.0 - 1e-14)
    throw PreconditionError("degenerate coherent pair: |<alpha|beta>| too close to 1");

  const double theta = 0.5 * std::asin(s);
  const double phi = -std::arg(ov);
  const double n_f = std::cos(2.0 * theta);

  // The prefactor 1/cos(2 theta) (rather than 1/sqrt) is what makes the pair
  // orthonormal; with it the inversion back to |alpha>, |beta> is exact.
  const HybridState ka = coherent_state(alpha, n_max, true);
  const HybridState kb = coherent_state(beta, n_max, true);
  const Complex em = std::exp(Complex(0, -0.5 * phi));
  const Complex ep = std::exp(Complex(0, +0.5 * phi));
  const double c = std::cos(theta), sn = std::sin(theta);
  HybridState plus = superpose(em * c / n_f, ka, -ep * sn / n_f, kb);
  HybridState minus = superpose(-em * sn / n_f, ka, ep * c / n_f, kb);
  return CoherentQubitBasis{theta, phi, n_f, alpha, beta, std::move(plus), std::move(minus)};
}

Matrix coherent_span_isometry(const std::vector<CoherentLabel>& components, int n_max) {
  if (components.empty()) throw PreconditionError("empty component set");
  const int m = static_cast<int>(components.size());
  Matrix b(n_max + 1, m);
  for (int k = 0; k < m; ++k)
    b.col(k) = coherent_state(components[k], n_max, true).amplitudes();
  const Matrix gram = b.adjoint() * b;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const Eigen::VectorXd w = es.eigenvalues();
  if (w.minCoeff() < 1e-12 * w.maxCoeff())
    throw PreconditionError("coherent component set is numerically degenerate");
  Vector inv_sqrt(m);
  for (int k = 0; k < m; ++k) inv_sqrt(k) = 1.0 / std::sqrt(w(k));
  // Loewdin: B G^{-1/2}
  return b * (es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint());
}

EbitVerdict one_ebit_condition(const EbitQuery& query, double tol) {
  const Complex ov = coherent_overlap(query.alpha, query.beta);
  const double s = std::abs(ov);
  if (s >= 1.0 - 1e-14)
    throw PreconditionError("degenerate coherent pair in ebit query");
  const double phi = -std::arg(ov);

  EbitVerdict v;
  // Both modes span the same pair, so the two embedding angles coincide by
  // construction; the residual is kept in the diagnostic for symmetry with
  // the general condition.
  v.amplitude_residual = 0.0;
  switch (query.variant) {
    case EbitQuery::Variant::SameSame:
      // psi - phi_a - phi_b = (2n+1) pi with phi_a = phi_b = phi.
      v.phase_residual = phase_distance(query.psi - 2.0 * phi - kPi);
      break;
    case EbitQuery::Variant::Cross:
      // Tracing |alpha,beta> + e^{i psi}|beta,alpha> gives a reduced state
      // proportional to the identity iff psi = (2n+1) pi, independent of the
      // overlap phase: the cross pairing cancels phi.
      v.phase_residual = phase_distance(query.psi - kPi);
      break;
  }
  v.one_ebit = v.amplitude_residual <= tol && v.phase_residual <= tol;
  return v;
}

double von_neumann_entropy(const DensityOperator& rho) {
  const Eigen::VectorXd ev = rho.eigenvalues();
  double h = 0.0;
  for (long i = 0; i < ev.size(); ++i) {
    const double p = std::clamp(ev(i), 0.0, 1.0);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double state_fidelity(const DensityOperator& rho, const HybridState& target) {
  if (rho.matrix().rows() != target.amplitudes().size())
    throw PreconditionError("dimension mismatch between density operator and target");
  const Complex f = target.amplitudes().dot(rho.matrix() * target.amplitudes());
  return f.real();
}

EmbeddedTwoMode project_two_mode(const HybridState& state, const Matrix& isometry_a,
                                 const Matrix& isometry_b) {
  const RegisterLayout& layout = state.layout();
  if (layout.qubit_count() != 0 || layout.mode_count() != 2)
    throw PreconditionError("project_two_mode expects a two-mode state");
  const long da = layout.subsystem_dim(0);
  const long db = layout.subsystem_dim(1);
  if (isometry_a.rows() != da || isometry_b.rows() != db)
    throw PreconditionError("isometry dimension mismatch");

  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> psi(state.amplitudes().data(), da, db);
  EmbeddedTwoMode out;
  out.coefficients = isometry_a.adjoint() * psi * isometry_b.conjugate();
  out.residual = state.squared_norm() - out.coefficients.squaredNorm();
  return out;
}

double schmidt_entropy(const Matrix& coefficients) {
  const double norm = coefficients.norm();
  if (norm <= 0.0) throw PreconditionError("zero coefficient matrix");
  Eigen::JacobiSVD<Matrix> svd(coefficients / norm);
  const Eigen::VectorXd sv = svd.singularValues();
  double h = 0.0;
  for (long i = 0; i < sv.size(); ++i) {
    const double p = sv(i) * sv(i);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

}  // namespace ckqed
