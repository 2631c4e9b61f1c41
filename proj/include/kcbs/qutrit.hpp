#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

// Exact complex linear algebra on the 3-level (qutrit) Hilbert space:
// states, density operators, unitaries, and the two elementary laser-pulse
// rotations on the |0>-|1> and |0>-|2> transitions.

namespace kcbs {

using Complex = std::complex<double>;
using Matrix3 = Eigen::Matrix3cd;
using Vector3 = Eigen::Vector3cd;

inline constexpr double kExactTol = 1e-12;
inline constexpr double kEigenvalueTol = 1e-10;

/// Pure qutrit state; normalized to 1 within 1e-12 on construction.
class Ket3 {
 public:
  explicit Ket3(const Vector3& amplitudes);

  /// Basis state |k>, k in {0,1,2}.
  static Ket3 basis(int k);

  const Vector3& amplitudes() const { return amp_; }

  /// |<this|other>|^2 — the global-phase-free comparison metric.
  double fidelity(const Ket3& other) const;

 private:
  Vector3 amp_;
};

/// Density operator: Hermitian, unit trace, positive semidefinite.
class Density3 {
 public:
  explicit Density3(const Matrix3& matrix);

  static Density3 pure(const Ket3& psi);

  const Matrix3& matrix() const { return m_; }

 private:
  Matrix3 m_;
};

/// 3x3 unitary; U†U = I within 1e-12 element-wise.
class Unitary3 {
 public:
  explicit Unitary3(const Matrix3& matrix);

  const Matrix3& matrix() const { return m_; }
  Unitary3 adjoint() const;

  Ket3 operator*(const Ket3& psi) const;
  Unitary3 operator*(const Unitary3& rhs) const;

  static Unitary3 identity();

 private:
  Matrix3 m_;
};

/// Which two-level transition a laser pulse drives.
enum class Transition { T1, T2 };  // |0>-|1>, |0>-|2>

/// One resonant laser pulse R_k^n(theta, phi).
struct Pulse {
  Transition transition = Transition::T1;
  double angle = 0.0;  // rad
  double phase = 0.0;  // rad
  int repeat = 1;

  Pulse inverse() const { return {transition, -angle, phase, repeat}; }
};

/// Rotation on the |0>,|1> block: -i e^{∓i phi} sin(theta/2) off-diagonals,
/// 1 on the |2> diagonal.
Unitary3 rot1(double theta, double phi);

/// Same acting on the |0>,|2> block.
Unitary3 rot2(double theta, double phi);

/// Matrix of a single pulse including its repeat power.
Matrix3 pulse_matrix(const Pulse& p);

/// Product of a pulse list; the first listed pulse acts first on the state
/// (matrix product right-to-left). Empty list gives the identity.
Unitary3 compose(std::span<const Pulse> pulses);

/// U rho U†.
Density3 apply(const Unitary3& u, const Density3& rho);

}  // namespace kcbs
