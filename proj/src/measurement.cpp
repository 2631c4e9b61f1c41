#include "kcbs/measurement.hpp"

namespace kcbs {

SharpMeasurement make_measurement(const Unitary3& u) {
  const Vector3 psi = u.matrix().col(0);  // U|0>
  Matrix3 bright = psi * psi.adjoint();
  Matrix3 dark = Matrix3::Identity() - bright;
  return {std::move(bright), std::move(dark), u};
}

std::vector<Branch> measure(const Density3& rho, const SharpMeasurement& m) {
  std::vector<Branch> branches;
  for (int outcome : {+1, -1}) {
    const Matrix3& proj = outcome > 0 ? m.bright : m.dark;
    Matrix3 post = proj * rho.matrix() * proj;
    // Re-symmetrize: the projector sandwich loses ~1e-16 of Hermiticity.
    post = (post + Matrix3(post.adjoint())) / 2.0;
    // tr(P rho P) = tr(P rho) for a projector; normalizing by the trace of
    // the sandwich itself keeps tiny branches exactly unit-trace.
    const double p = post.trace().real();
    if (p < kBranchTol) continue;
    branches.push_back({outcome, p, Density3(Matrix3(post / p))});
  }
  return branches;
}

double PairDistribution::marginal_first() const {
  return p[index(1, 1)] + p[index(1, -1)] - p[index(-1, 1)] - p[index(-1, -1)];
}

double PairDistribution::marginal_second() const {
  return p[index(1, 1)] - p[index(1, -1)] + p[index(-1, 1)] - p[index(-1, -1)];
}

double PairDistribution::correlator() const {
  return p[index(1, 1)] - p[index(1, -1)] - p[index(-1, 1)] + p[index(-1, -1)];
}

PairDistribution pair_distribution(const Density3& rho0, const SharpMeasurement& m_first,
                                   const SharpMeasurement& m_second) {
  PairDistribution d;
  for (const Branch& b1 : measure(rho0, m_first)) {
    for (const Branch& b2 : measure(b1.state, m_second)) {
      const int k = PairDistribution::index(b1.outcome, b2.outcome);
      d.p[k] = b1.probability * b2.probability;
      d.post_states[k] = b2.state;
    }
  }
  return d;
}

void DetectionError::validate() const {
  if (bright_error < 0.0 || bright_error > 1.0 || dark_error < 0.0 || dark_error > 1.0)
    throw std::invalid_argument("DetectionError: rates must lie in [0, 1]");
}

PairDistribution apply_detection_error(const PairDistribution& d, const DetectionError& e) {
  e.validate();
  // flip(a -> b): probability of reading b given true outcome a.
  const auto flip = [&e](int a, int b) {
    if (a > 0) return b > 0 ? 1.0 - e.bright_error : e.bright_error;
    return b > 0 ? e.dark_error : 1.0 - e.dark_error;
  };
  PairDistribution out;
  out.post_states = d.post_states;  // labels flip, physical branches do not
  for (int b1 : {+1, -1})
    for (int b2 : {+1, -1}) {
      double p = 0.0;
      for (int a1 : {+1, -1})
        for (int a2 : {+1, -1})
          p += d.probability(a1, a2) * flip(a1, b1) * flip(a2, b2);
      out.p[PairDistribution::index(b1, b2)] = p;
    }
  return out;
}

}  // namespace kcbs
