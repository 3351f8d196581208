#include "ckqed/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ckqed {
namespace {

// sin(w t)/w, continuous at w = 0.
double sinc_t(double omega, double t) {
  if (omega == 0.0) return t;
  return std::sin(omega * t) / omega;
}

RegisterLayout qubit_mode_fragment(int n_max) { return RegisterLayout(1, {n_max}); }

long eidx(int n_max, int q, int n) { return static_cast<long>(q) * (n_max + 1) + n; }

}  // namespace

double effective_rabi(int n, const JCParams& params) {
  if (n < 0) throw PreconditionError("photon number must be non-negative");
  return std::sqrt(0.25 * params.delta * params.delta +
                   params.lambda * params.lambda * n);
}

Propagator exact_jc_propagator(const JCParams& params, int n_max) {
  if (n_max < 1) throw PreconditionError("exact propagator needs n_max >= 1");
  if (params.lambda <= 0.0) throw PreconditionError("coupling lambda must be positive");
  if (params.t < 0.0) throw PreconditionError("negative interaction time");

  const int d = n_max + 1;
  const double delta = params.delta;
  const double t = params.t;
  Matrix u = Matrix::Zero(2 * d, 2 * d);

  // |g,0>: scalar cos(W0 t) + i delta sin(W0 t)/(2 W0), W0 = |delta|/2.
  const double w0 = 0.5 * std::abs(delta);
  u(eidx(n_max, 0, 0), eidx(n_max, 0, 0)) =
      Complex(std::cos(w0 * t), 0.5 * delta * sinc_t(w0, t));

  // Blocks on {|e,n>, |g,n+1>} for n = 0..n_max-1.
  for (int n = 0; n + 1 <= n_max; ++n) {
    const double w = effective_rabi(n + 1, params);
    const double c = std::cos(w * t);
    const double s = sinc_t(w, t);
    const double ladder = params.lambda * std::sqrt(static_cast<double>(n + 1));
    const long ie = eidx(n_max, 1, n);
    const long ig = eidx(n_max, 0, n + 1);
    u(ie, ie) = Complex(c, -0.5 * delta * s);
    u(ig, ig) = Complex(c, +0.5 * delta * s);
    u(ig, ie) = Complex(0, -ladder * s);
    u(ie, ig) = Complex(0, -ladder * s);
  }

  // |e,n_max>: the coupling to |g,n_max+1> is truncated away, leaving only
  // the detuning phase. Unitary, but not the physical block.
  u(eidx(n_max, 1, n_max), eidx(n_max, 1, n_max)) = std::exp(Complex(0, -0.5 * delta * t));

  std::ostringstream prov;
  prov << "jc(delta=" << params.delta << ", lambda=" << params.lambda << ", t=" << params.t << ")";
  return Propagator{std::move(u), qubit_mode_fragment(n_max), prov.str(), true};
}

Propagator dispersive_propagator(DispersivePhase phase, int n_max) {
  if (n_max < 0) throw PreconditionError("n_max must be non-negative");
  if (phase.sign != 1 && phase.sign != -1) throw PreconditionError("sign must be +1 or -1");
  if (!std::isfinite(phase.phi)) throw PreconditionError("phase must be finite");

  const int d = n_max + 1;
  const double sp = phase.sign * phase.phi;
  Matrix u = Matrix::Zero(2 * d, 2 * d);
  for (int n = 0; n < d; ++n) {
    u(eidx(n_max, 0, n), eidx(n_max, 0, n)) = std::exp(Complex(0, +sp * n));
    u(eidx(n_max, 1, n), eidx(n_max, 1, n)) = std::exp(Complex(0, -sp * (n + 1)));
  }
  std::ostringstream prov;
  prov << "dispersive(phi=" << phase.phi << ", sign=" << phase.sign << ")";
  return Propagator{std::move(u), qubit_mode_fragment(n_max), prov.str(), false};
}

Propagator rotating_frame(const JCParams& params, int n_max) {
  if (n_max < 0) throw PreconditionError("n_max must be non-negative");
  const int d = n_max + 1;
  const double half = 0.5 * std::abs(params.delta) * params.t;
  Matrix u = Matrix::Zero(2 * d, 2 * d);
  for (int n = 0; n < d; ++n) {
    u(eidx(n_max, 0, n), eidx(n_max, 0, n)) = std::exp(Complex(0, -half));
    u(eidx(n_max, 1, n), eidx(n_max, 1, n)) = std::exp(Complex(0, +half));
  }
  std::ostringstream prov;
  prov << "rotating_frame(|delta|t=" << std::abs(params.delta) * params.t << ")";
  return Propagator{std::move(u), qubit_mode_fragment(n_max), prov.str(), false};
}

Propagator ising_gate(double chi) {
  if (!std::isfinite(chi)) throw PreconditionError("chi must be finite");
  Matrix u = Matrix::Identity(4, 4);
  u(3, 3) = std::exp(Complex(0, -chi));
  std::ostringstream prov;
  prov << "ising(chi=" << chi << ")";
  return Propagator{std::move(u), RegisterLayout::qubits(2), prov.str(), false};
}

ValidityReport dispersive_validity(const JCParams& params, double nbar, double dn,
                                   double threshold) {
  if (nbar < 0.0 || dn < 0.0) throw PreconditionError("nbar and dn must be non-negative");
  const double num = 0.25 * params.delta * params.delta;
  const double l2 = params.lambda * params.lambda;
  const double inf = std::numeric_limits<double>::infinity();
  ValidityReport rep;
  rep.threshold = threshold;
  rep.r1 = (l2 * nbar == 0.0) ? inf : num / (l2 * nbar);
  rep.r2 = (l2 * dn == 0.0) ? inf : num / (l2 * dn);
  rep.pass = rep.r1 > threshold && rep.r2 > threshold;
  return rep;
}

}  // namespace ckqed
