#include "kcbs/qutrit.hpp"

#include <cmath>

namespace kcbs {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

bool is_unitary(const Matrix3& m, double tol) {
  return ((m.adjoint() * m) - Matrix3::Identity()).cwiseAbs().maxCoeff() < tol;
}

}  // namespace

Ket3::Ket3(const Vector3& amplitudes) : amp_(amplitudes) {
  const double norm = amp_.norm();
  if (!std::isfinite(norm) || norm < kExactTol)
    throw std::invalid_argument("Ket3: amplitudes not normalizable");
  amp_ /= norm;
}

Ket3 Ket3::basis(int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("Ket3::basis: index out of range");
  Vector3 v = Vector3::Zero();
  v(k) = 1.0;
  return Ket3(v);
}

double Ket3::fidelity(const Ket3& other) const {
  return std::norm(amp_.dot(other.amp_));
}

Density3::Density3(const Matrix3& matrix) : m_(matrix) {
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() >= kExactTol)
    throw std::invalid_argument("Density3: not Hermitian");
  if (std::abs(m_.trace().real() - 1.0) >= kExactTol || std::abs(m_.trace().imag()) >= kExactTol)
    throw std::invalid_argument("Density3: trace != 1");
  Eigen::SelfAdjointEigenSolver<Matrix3> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kEigenvalueTol)
    throw std::invalid_argument("Density3: negative eigenvalue");
}

Density3 Density3::pure(const Ket3& psi) {
  return Density3(psi.amplitudes() * psi.amplitudes().adjoint());
}

Unitary3::Unitary3(const Matrix3& matrix) : m_(matrix) {
  if (!is_unitary(m_, kExactTol)) throw std::invalid_argument("Unitary3: U†U != I");
}

Unitary3 Unitary3::adjoint() const { return Unitary3(m_.adjoint()); }

Ket3 Unitary3::operator*(const Ket3& psi) const { return Ket3(m_ * psi.amplitudes()); }

Unitary3 Unitary3::operator*(const Unitary3& rhs) const { return Unitary3(m_ * rhs.m_); }

Unitary3 Unitary3::identity() { return Unitary3(Matrix3::Identity()); }

Unitary3 rot1(double theta, double phi) {
  require_finite(theta, "rot1: theta");
  require_finite(phi, "rot1: phi");
  const double c = std::cos(theta / 2.0);
  const Complex s = Complex(0, -1) * std::sin(theta / 2.0);
  Matrix3 m = Matrix3::Identity();
  m(0, 0) = c;
  m(1, 1) = c;
  m(0, 1) = s * std::exp(Complex(0, -phi));
  m(1, 0) = s * std::exp(Complex(0, phi));
  return Unitary3(m);
}

Unitary3 rot2(double theta, double phi) {
  require_finite(theta, "rot2: theta");
  require_finite(phi, "rot2: phi");
  const double c = std::cos(theta / 2.0);
  const Complex s = Complex(0, -1) * std::sin(theta / 2.0);
  Matrix3 m = Matrix3::Identity();
  m(0, 0) = c;
  m(2, 2) = c;
  m(0, 2) = s * std::exp(Complex(0, -phi));
  m(2, 0) = s * std::exp(Complex(0, phi));
  return Unitary3(m);
}

Matrix3 pulse_matrix(const Pulse& p) {
  if (p.repeat < 0) throw std::invalid_argument("Pulse: repeat < 0");
  const Unitary3 one = p.transition == Transition::T1 ? rot1(p.angle, p.phase)
                                                      : rot2(p.angle, p.phase);
  Matrix3 m = Matrix3::Identity();
  for (int k = 0; k < p.repeat; ++k) m = one.matrix() * m;
  return m;
}

Unitary3 compose(std::span<const Pulse> pulses) {
  Matrix3 m = Matrix3::Identity();
  for (const Pulse& p : pulses) m = pulse_matrix(p) * m;  // first pulse acts first
  return Unitary3(m);
}

Density3 apply(const Unitary3& u, const Density3& rho) {
  return Density3(u.matrix() * rho.matrix() * u.matrix().adjoint());
}

}  // namespace kcbs
