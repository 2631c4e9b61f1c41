#include "kcbs/theory.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "kcbs/measurement.hpp"
#include "kcbs/ngon.hpp"

namespace kcbs {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt5 = std::sqrt(5.0);

void require_odd_n(int n_obs, const char* what) {
  if (n_obs < 5 || n_obs % 2 == 0)
    throw std::invalid_argument(std::string(what) + ": n_obs must be odd and >= 5");
}

}  // namespace

BoundSet bounds(int n_obs) {
  require_odd_n(n_obs, "bounds");
  const double c = std::cos(kPi / n_obs);
  BoundSet b;
  b.nc = -n_obs + 2.0;
  b.qm = (n_obs - 3.0 * n_obs * c) / (1.0 + c);
  b.ns = -static_cast<double>(n_obs);
  // Odd-cycle quantum maximum within Bell scenarios, i.e. the chained Bell
  // test with (N-1)/2 settings per party.
  b.bell = n_obs - 4.0 * (0.5 + (n_obs - 1) / 4.0 * (1.0 + std::cos(kPi / (n_obs - 1))));
  return b;
}

double s5_theory(double theta) {
  return 5.0 * (3.0 - kSqrt5 + (5.0 + kSqrt5) * std::cos(4.0 * theta)) / 8.0;
}

double epsilon_theory(double theta) {
  const double s2 = std::sin(2.0 * theta);
  return std::abs((5.0 - kSqrt5 + 5.0 * (3.0 + kSqrt5) * std::cos(2.0 * theta)) * s2 * s2) / 16.0;
}

double s5_ext_theory(double theta) { return s5_theory(theta) + 5.0 * epsilon_theory(theta); }

double folded_normal_mean(double mu, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("folded_normal_mean: sigma < 0");
  if (sigma == 0.0) return std::abs(mu);
  return sigma * std::sqrt(2.0 / kPi) * std::exp(-mu * mu / (2.0 * sigma * sigma)) -
         mu * std::erf(-mu / (std::sqrt(2.0) * sigma));
}

double expected_epsilon(double theta, long n) {
  if (n < 1) throw std::invalid_argument("expected_epsilon: n < 1");
  const double a = std::cos(2.0 * theta);  // <A_i>
  const double var = (1.0 - a * a) / static_cast<double>(n);  // per marginal
  return folded_normal_mean(epsilon_theory(theta), std::sqrt(2.0 * var));
}

double theta_estimate(const std::vector<double>& first_marginals) {
  if (first_marginals.empty()) throw std::invalid_argument("theta_estimate: empty input");
  double mean = 0.0;
  for (double m : first_marginals) mean += m;
  mean /= static_cast<double>(first_marginals.size());
  if (mean < -1.0 || mean > 1.0)
    throw std::invalid_argument("theta_estimate: mean marginal outside [-1, 1]");
  return 0.5 * std::acos(mean);
}

double classical_bound_bruteforce(int n_obs) {
  if (n_obs < 3 || n_obs > 25)
    throw std::invalid_argument("classical_bound_bruteforce: n_obs must be in [3, 25]");
  int best = n_obs;
  const std::uint64_t limit = 1ULL << n_obs;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    // bit i set = A_{i+1} = -1
    int sum = 0;
    for (int i = 0; i < n_obs; ++i) {
      const int a = (mask >> i) & 1 ? -1 : 1;
      const int b = (mask >> ((i + 1) % n_obs)) & 1 ? -1 : 1;
      sum += a * b;
    }
    if (sum < best) best = sum;
  }
  return best;
}

NgonTheory ngon_theory(int n_obs, double theta) {
  require_odd_n(n_obs, "ngon_theory");
  const NgonFrame frame = build_frame({n_obs, theta, SequenceMode::Block});
  const Density3 rho0 = Density3::pure(Ket3::basis(0));
  const SharpMeasurement m1 = make_measurement(frame.unitaries[0]);
  const SharpMeasurement m2 = make_measurement(frame.unitaries[1]);
  const PairDistribution d = pair_distribution(rho0, m1, m2);
  NgonTheory t;
  t.s = n_obs * d.correlator();  // all pairs equal by cyclic symmetry
  t.epsilon = std::abs(d.marginal_first() - d.marginal_second());
  t.s_ext = t.s + n_obs * t.epsilon;
  return t;
}

}  // namespace kcbs
