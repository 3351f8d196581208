// Register layout: an ordered list of subsystems, qubits first, then cavity
// modes, indexed row-major (subsystem 0 varies slowest).

#pragma once

#include <numeric>
#include <span>
#include <vector>

#include "ckqed/types.hpp"

namespace ckqed {

class RegisterLayout {
 public:
  RegisterLayout() = default;
  RegisterLayout(int qubit_count, std::vector<int> mode_n_max)
      : qubit_count_(qubit_count), mode_n_max_(std::move(mode_n_max)) {
    if (qubit_count_ < 0) throw PreconditionError("negative qubit count");
    for (int n : mode_n_max_)
      if (n < 0) throw PreconditionError("negative mode truncation");
  }

  static RegisterLayout qubits(int count) { return RegisterLayout(count, {}); }
  static RegisterLayout single_mode(int n_max) { return RegisterLayout(0, {n_max}); }

  int qubit_count() const { return qubit_count_; }
  int mode_count() const { return static_cast<int>(mode_n_max_.size()); }
  int subsystem_count() const { return qubit_count_ + mode_count(); }
  const std::vector<int>& mode_n_max() const { return mode_n_max_; }

  bool is_qubit(int s) const { return s < qubit_count_; }
  /// Subsystem index of mode m (modes follow the qubits).
  int mode_subsystem(int m) const { return qubit_count_ + m; }

  int subsystem_dim(int s) const {
    check_subsystem(s);
    return is_qubit(s) ? 2 : mode_n_max_[s - qubit_count_] + 1;
  }

  long total_dim() const {
    long d = 1;
    for (int s = 0; s < subsystem_count(); ++s) d *= subsystem_dim(s);
    return d;
  }

  /// Row-major strides: stride of the last subsystem is 1.
  std::vector<long> strides() const {
    const int n = subsystem_count();
    std::vector<long> st(n, 1);
    for (int s = n - 2; s >= 0; --s) st[s] = st[s + 1] * subsystem_dim(s + 1);
    return st;
  }

  long index_of(std::span<const int> digits) const {
    const auto st = strides();
    long idx = 0;
    for (int s = 0; s < subsystem_count(); ++s) idx += digits[s] * st[s];
    return idx;
  }

  void digits_of(long index, std::span<int> out) const {
    const auto st = strides();
    for (int s = 0; s < subsystem_count(); ++s) {
      out[s] = static_cast<int>(index / st[s]);
      index %= st[s];
    }
  }

  /// Layout with one subsystem removed (after a destructive measurement).
  RegisterLayout without(int s) const {
    check_subsystem(s);
    if (is_qubit(s)) return RegisterLayout(qubit_count_ - 1, mode_n_max_);
    std::vector<int> modes = mode_n_max_;
    modes.erase(modes.begin() + (s - qubit_count_));
    return RegisterLayout(qubit_count_, std::move(modes));
  }

  void check_subsystem(int s) const {
    if (s < 0 || s >= subsystem_count())
      throw PreconditionError("subsystem index out of range");
  }

  bool operator==(const RegisterLayout& other) const {
    return qubit_count_ == other.qubit_count_ && mode_n_max_ == other.mode_n_max_;
  }

 private:
  int qubit_count_ = 0;
  std::vector<int> mode_n_max_;
};

}  // namespace ckqed
