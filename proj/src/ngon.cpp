#include "kcbs/ngon.hpp"

#include <cmath>
#include <numbers>

namespace kcbs {

namespace {

constexpr double kPi = std::numbers::pi;

void require_index(const NgonConfig& config, int i) {
  if (i < 1 || i > config.n_obs) throw std::invalid_argument("ngon: index out of range");
}

}  // namespace

void NgonConfig::validate() const {
  if (n_obs < 5 || n_obs % 2 == 0)
    throw std::invalid_argument("NgonConfig: n_obs must be odd and >= 5");
  if (!std::isfinite(theta) || theta < 0.0 || theta > kPi / 2.0)
    throw std::invalid_argument("NgonConfig: theta must lie in [0, pi/2]");
}

double compatibility_angle(int n_obs) {
  if (n_obs < 5 || n_obs % 2 == 0)
    throw std::invalid_argument("compatibility_angle: n_obs must be odd and >= 5");
  const double c = std::cos(kPi / n_obs);
  return std::acos(std::sqrt(c / (1.0 + c)));
}

Unitary3 ry(double theta) { return rot1(2.0 * theta, kPi / 2.0); }

Unitary3 rz_power(int n_obs, int m) {
  Matrix3 u = Matrix3::Identity();
  const Matrix3 step = (rot2(kPi, kPi / 2.0).matrix() *
                        rot1(4.0 * kPi / n_obs, kPi / 2.0).matrix() *
                        rot2(kPi, -kPi / 2.0).matrix());
  for (int k = 0; k < m; ++k) u = step * u;
  return Unitary3(u);
}

int rz_exponent(int n_obs, int i) {
  // (i-1)(N-1)/2 mod N; R_z^N(2 pi / N) is exactly the identity here.
  const long m = static_cast<long>(i - 1) * ((n_obs - 1) / 2);
  return static_cast<int>(m % n_obs);
}

NgonFrame build_frame(const NgonConfig& config) {
  config.validate();
  NgonFrame frame{config, {}, {}};
  const Unitary3 opening = ry(config.theta);
  const Ket3 zero = Ket3::basis(0);
  for (int i = 1; i <= config.n_obs; ++i) {
    Unitary3 u = rz_power(config.n_obs, rz_exponent(config.n_obs, i)) * opening;
    frame.states.push_back(u * zero);
    frame.unitaries.push_back(std::move(u));
  }
  return frame;
}

std::vector<Pulse> pulse_decomposition(const NgonConfig& config, int i) {
  config.validate();
  require_index(config, i);
  const int m = rz_exponent(config.n_obs, i);
  return {
      {Transition::T1, 2.0 * config.theta, kPi / 2.0, 1},      // R_y(theta)
      {Transition::T2, kPi, -kPi / 2.0, 1},
      {Transition::T1, 4.0 * kPi / config.n_obs, kPi / 2.0, m},
      {Transition::T2, kPi, kPi / 2.0, 1},
  };
}

namespace {

std::vector<Pulse> inverted(std::vector<Pulse> pulses) {
  std::vector<Pulse> out;
  out.reserve(pulses.size());
  for (auto it = pulses.rbegin(); it != pulses.rend(); ++it) out.push_back(it->inverse());
  return out;
}

// Pulses for R_y† R_z^{dm} R_y, the index-difference transition.
std::vector<Pulse> concatenated_pulses(const NgonConfig& config, int dm) {
  return {
      {Transition::T1, 2.0 * config.theta, kPi / 2.0, 1},
      {Transition::T2, kPi, -kPi / 2.0, 1},
      {Transition::T1, 4.0 * kPi / config.n_obs, kPi / 2.0, dm},
      {Transition::T2, kPi, kPi / 2.0, 1},
      {Transition::T1, -2.0 * config.theta, kPi / 2.0, 1},
  };
}

}  // namespace

Unitary3 transition_unitary(const NgonConfig& config, int i, int j) {
  config.validate();
  require_index(config, i);
  require_index(config, j);
  if (config.mode == SequenceMode::Block) {
    const Unitary3 ui = rz_power(config.n_obs, rz_exponent(config.n_obs, i)) * ry(config.theta);
    const Unitary3 uj = rz_power(config.n_obs, rz_exponent(config.n_obs, j)) * ry(config.theta);
    return uj.adjoint() * ui;
  }
  const int dm = ((rz_exponent(config.n_obs, i) - rz_exponent(config.n_obs, j)) % config.n_obs +
                  config.n_obs) % config.n_obs;
  return ry(config.theta).adjoint() * rz_power(config.n_obs, dm) * ry(config.theta);
}

std::vector<Pulse> transition_pulses(const NgonConfig& config, int i, int j) {
  config.validate();
  require_index(config, i);
  require_index(config, j);
  if (config.mode == SequenceMode::Block) {
    std::vector<Pulse> out = pulse_decomposition(config, i);
    for (const Pulse& p : inverted(pulse_decomposition(config, j))) out.push_back(p);
    return out;
  }
  const int dm = ((rz_exponent(config.n_obs, i) - rz_exponent(config.n_obs, j)) % config.n_obs +
                  config.n_obs) % config.n_obs;
  return concatenated_pulses(config, dm);
}

std::vector<Pulse> first_rotation_pulses(const NgonConfig& config, int i) {
  config.validate();
  require_index(config, i);
  if (config.mode == SequenceMode::Block) return inverted(pulse_decomposition(config, i));
  // R_z fixes |0>, so only the R_y leg of U_i† matters for the first rotation.
  return {{Transition::T1, -2.0 * config.theta, kPi / 2.0, 1}};
}

std::size_t pulse_count(std::span<const Pulse> pulses) {
  std::size_t n = 0;
  for (const Pulse& p : pulses) n += static_cast<std::size_t>(p.repeat);
  return n;
}

std::size_t total_pulses_all_pairs(const NgonConfig& config) {
  std::size_t total = 0;
  for (int i = 1; i <= config.n_obs; ++i) {
    const int j = i % config.n_obs + 1;
    total += pulse_count(first_rotation_pulses(config, i));
    total += pulse_count(transition_pulses(config, i, j));
  }
  return total;
}

}  // namespace kcbs
