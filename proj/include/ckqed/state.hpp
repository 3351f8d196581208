// Pure hybrid register states and density operators. Values are immutable
// after construction; all operations on them are pure functions.

#pragma once

#include <optional>

#include "ckqed/layout.hpp"
#include "ckqed/types.hpp"

namespace ckqed {

class DensityOperator;

class HybridState {
 public:
  HybridState(RegisterLayout layout, Vector amplitudes)
      : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (amps_.size() != layout_.total_dim())
      throw PreconditionError("amplitude vector does not match layout dimension");
  }

  const RegisterLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amps_; }

  double squared_norm() const { return amps_.squaredNorm(); }

  HybridState normalized() const {
    const double n = amps_.norm();
    if (n <= 0.0) throw PreconditionError("cannot normalize the zero state");
    return HybridState(layout_, amps_ / n);
  }

  /// <this|other>
  Complex inner(const HybridState& other) const {
    if (!(layout_ == other.layout_)) throw PreconditionError("layout mismatch");
    return amps_.dot(other.amps_);
  }

  /// |<this|other>|^2 — states are always compared modulo global phase.
  double fidelity(const HybridState& other) const { return std::norm(inner(other)); }

  DensityOperator to_density() const;

 private:
  RegisterLayout layout_;
  Vector amps_;
};

class DensityOperator {
 public:
  DensityOperator(RegisterLayout layout, Matrix matrix)
      : layout_(std::move(layout)), m_(std::move(matrix)) {
    const long d = layout_.total_dim();
    if (m_.rows() != d || m_.cols() != d)
      throw PreconditionError("density matrix does not match layout dimension");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
      throw ToleranceError("density matrix is not Hermitian within 1e-10");
    if (std::abs(m_.trace().real() - 1.0) > 1e-10 || std::abs(m_.trace().imag()) > 1e-10)
      throw ToleranceError("density matrix trace differs from 1 beyond 1e-10");
  }

  const RegisterLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return m_; }

  double purity() const { return (m_ * m_).trace().real(); }

  /// Eigenvalues, ascending. Negativity below -1e-8 is an error.
  Eigen::VectorXd eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -1e-8)
      throw ToleranceError("density matrix has eigenvalue below -1e-8");
    return ev;
  }

 private:
  RegisterLayout layout_;
  Matrix m_;
};

inline DensityOperator HybridState::to_density() const {
  return DensityOperator(layout_, amps_ * amps_.adjoint());
}

}  // namespace ckqed
