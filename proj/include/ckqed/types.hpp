// Basic scalar types, coherent-state labels and error categories shared by
// every module of the library.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ckqed {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// A violated operation precondition (bad subsystem index, unnormalized
/// input, state outside the expected span, ...).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical tolerance that could not be met (quadrature non-convergence,
/// norm drift, eigenvalue negativity beyond the allowed band).
class ToleranceError : public std::runtime_error {
 public:
  explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

/// Dimensionless coherent-field amplitude.
struct CoherentLabel {
  Complex amplitude{0.0, 0.0};

  CoherentLabel() = default;
  CoherentLabel(Complex a) : amplitude(a) {}
  CoherentLabel(double re, double im) : amplitude(re, im) {}

  double magnitude() const { return std::abs(amplitude); }
};

/// Closed-form overlap <mu|nu> = exp(-|mu|^2/2 - |nu|^2/2 + conj(mu) nu).
inline Complex coherent_overlap(CoherentLabel mu, CoherentLabel nu) {
  const Complex m = mu.amplitude;
  const Complex n = nu.amplitude;
  return std::exp(-0.5 * std::norm(m) - 0.5 * std::norm(n) + std::conj(m) * n);
}

/// Default Fock truncation for a field of magnitude a: ceil(a^2 + 6a + 10).
/// Keeps the Poisson tail below 1e-10 for a <= 4.
inline int default_n_max(double magnitude) {
  return static_cast<int>(std::ceil(magnitude * magnitude + 6.0 * magnitude + 10.0));
}

}  // namespace ckqed
