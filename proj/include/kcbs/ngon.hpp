#pragma once

#include <cstddef>
#include <vector>

#include "kcbs/qutrit.hpp"

// N-gon measurement directions |psi_i>, their unitaries U_i, pulse-level
// decompositions, and the compatibility angle theta_N.

namespace kcbs {

/// How a pair-measurement sequence is compiled to pulses.
enum class SequenceMode { Block, Concatenated };

struct NgonConfig {
  int n_obs = 5;        // odd, >= 5
  double theta = 0.0;   // opening angle, [0, pi/2]
  SequenceMode mode = SequenceMode::Block;

  void validate() const;
};

struct NgonFrame {
  NgonConfig config;
  std::vector<Unitary3> unitaries;  // U_1..U_N
  std::vector<Ket3> states;         // |psi_1>..|psi_N>
};

/// theta_N = arccos sqrt(cos(pi/N) / (1 + cos(pi/N))), the angle at which
/// adjacent N-gon states are orthogonal.
double compatibility_angle(int n_obs);

/// Rotation by theta about |2> (01-plane).
Unitary3 ry(double theta);

/// m-fold rotation about |0> (12-plane) in steps of 2*pi/n_obs.
Unitary3 rz_power(int n_obs, int m);

/// R_z exponent of U_i, (i-1)(N-1)/2 reduced mod N.
int rz_exponent(int n_obs, int i);

NgonFrame build_frame(const NgonConfig& config);

/// Pulse list realizing U_i (first listed pulse acts first):
/// R_y(theta) = R_1(2 theta, pi/2), then
/// R_z^m = R_2(pi,-pi/2) first, R_1^m(4 pi/N, pi/2), R_2(pi,pi/2) last.
std::vector<Pulse> pulse_decomposition(const NgonConfig& config, int i);

/// Unitary applied between the two detections of a pair measurement.
/// Block: the literal product U_j† U_i. Concatenated: the single
/// index-difference construction R_y† R_z^{(m_i-m_j) mod N} R_y. The two
/// agree up to global phase in the ideal model.
Unitary3 transition_unitary(const NgonConfig& config, int i, int j);

/// Pulse sequence realizing transition_unitary under the same mode.
std::vector<Pulse> transition_pulses(const NgonConfig& config, int i, int j);

/// Pulses for the rotation before the first detection (realizes U_i†).
/// Concatenated mode drops the R_z prefix, which acts trivially on |0>.
std::vector<Pulse> first_rotation_pulses(const NgonConfig& config, int i);

/// Elementary pulse count, counting repeats with multiplicity.
std::size_t pulse_count(std::span<const Pulse> pulses);

/// Total elementary pulses to measure all N adjacent pairs in normal order.
std::size_t total_pulses_all_pairs(const NgonConfig& config);

}  // namespace kcbs
