#pragma once

#include <array>
#include <optional>
#include <vector>

#include "kcbs/qutrit.hpp"

// Sharp (Lüders) sequential measurements of M_i: exact joint outcome
// distributions and post-measurement states, plus the classical
// detection-error channel.

namespace kcbs {

// Branches below this probability are dropped to avoid 0/0 in the Lüders
// renormalization at exact-eigenstate inputs.
inline constexpr double kBranchTol = 1e-14;

/// Observable M_i = P_B,i - P_D,i with P_B,i = U_i|0><0|U_i†.
struct SharpMeasurement {
  Matrix3 bright;  // rank-1 projector
  Matrix3 dark;    // rank-2 projector
  Unitary3 unitary;
};

SharpMeasurement make_measurement(const Unitary3& u);

struct Branch {
  int outcome;         // +1 (bright) or -1 (dark)
  double probability;  // tr(P rho)
  Density3 state;      // P rho P / p
};

/// Lüders measurement; branches with p < 1e-14 are omitted.
std::vector<Branch> measure(const Density3& rho, const SharpMeasurement& m);

/// Joint distribution of a sequential pair measurement.
/// Outcomes indexed (a1, a2) with +1 first: index = (a1<0)*2 + (a2<0).
struct PairDistribution {
  std::array<double, 4> p{};
  std::array<std::optional<Density3>, 4> post_states{};

  static int index(int a1, int a2) { return (a1 < 0 ? 2 : 0) + (a2 < 0 ? 1 : 0); }
  double probability(int a1, int a2) const { return p[index(a1, a2)]; }

  double marginal_first() const;   // <A^(1)>
  double marginal_second() const;  // <A^(2)>
  double correlator() const;       // <A^(1) A^(2)>
};

PairDistribution pair_distribution(const Density3& rho0,
                                   const SharpMeasurement& m_first,
                                   const SharpMeasurement& m_second);

/// Readout misassignment rates.
struct DetectionError {
  double bright_error = 0.0;  // bright misread as dark
  double dark_error = 0.0;    // dark misread as bright

  void validate() const;
};

/// Classical label flips, independent per measurement. Post states keep the
/// true branch (labels only are flipped; see module notes).
PairDistribution apply_detection_error(const PairDistribution& d,
                                       const DetectionError& e);

}  // namespace kcbs
