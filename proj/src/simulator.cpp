#include "kcbs/simulator.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "kcbs/rng.hpp"

namespace kcbs {

namespace {

constexpr double kPi = std::numbers::pi;

// Stream purposes; separating them keeps degenerate noise byte-identical
// to Ideal mode (noise draws never touch the outcome stream).
enum StreamPurpose : std::uint64_t { kOutcomeStream = 1, kNoiseStream = 2 };

int second_index(int n_obs, int i, Order order) {
  return order == Order::Normal ? i % n_obs + 1 : (i - 2 + n_obs) % n_obs + 1;
}

std::vector<Pulse> expand_repeats(std::span<const Pulse> pulses) {
  std::vector<Pulse> out;
  for (const Pulse& p : pulses) {
    for (int k = 0; k < p.repeat; ++k) out.push_back({p.transition, p.angle, p.phase, 1});
  }
  return out;
}

// Jitters every elementary pulse and applies the common-detuning phase walk.
// Returns the perturbed sequence and accumulates the sequence duration.
std::vector<Pulse> perturb(std::span<const Pulse> pulses, const NoiseModel& noise,
                           double detuning_hz, RandomStream& rng, double& duration_s) {
  std::vector<Pulse> out = expand_repeats(pulses);
  for (Pulse& p : out) {
    if (noise.pulse_angle_sd > 0.0) p.angle += noise.pulse_angle_sd * rng.next_normal();
    if (noise.pulse_phase_sd > 0.0) p.phase += noise.pulse_phase_sd * rng.next_normal();
    p.phase += 2.0 * kPi * detuning_hz * duration_s;
    duration_s += std::abs(p.angle) / kPi * noise.seconds_per_pi_pulse;
  }
  return out;
}

// Rotate-detect-rotate-detect with explicit unitaries for the two legs.
PairDistribution sequence_distribution(const Unitary3& before_first,
                                       const Unitary3& between) {
  const Density3 rho0 = Density3::pure(Ket3::basis(0));
  const SharpMeasurement along_zero = make_measurement(Unitary3::identity());
  PairDistribution d;
  for (const Branch& b1 : measure(apply(before_first, rho0), along_zero)) {
    for (const Branch& b2 : measure(apply(between, b1.state), along_zero)) {
      const int k = PairDistribution::index(b1.outcome, b2.outcome);
      d.p[k] = b1.probability * b2.probability;
      d.post_states[k] = b2.state;
    }
  }
  return d;
}

PairDistribution mix_with_marginal_product(const PairDistribution& d, double contrast) {
  // Shrinks the connected correlator by `contrast`, keeping both marginals.
  const double p1 = (1.0 + d.marginal_first()) / 2.0;
  const double p2 = (1.0 + d.marginal_second()) / 2.0;
  PairDistribution out = d;
  for (int a1 : {+1, -1})
    for (int a2 : {+1, -1}) {
      const double prod = (a1 > 0 ? p1 : 1.0 - p1) * (a2 > 0 ? p2 : 1.0 - p2);
      const int k = PairDistribution::index(a1, a2);
      out.p[k] = contrast * d.p[k] + (1.0 - contrast) * prod;
    }
  return out;
}

std::pair<int, int> draw_outcome(const PairDistribution& d, RandomStream& rng) {
  const double u = rng.next_double();
  double cum = 0.0;
  constexpr int kOutcomes[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (const auto& [a1, a2] : kOutcomes) {
    cum += d.probability(a1, a2);
    if (u < cum) return {a1, a2};
  }
  return {-1, -1};  // guard against rounding at cum ~ 1
}

}  // namespace

void NoiseModel::validate() const {
  if (pulse_angle_sd < 0.0 || pulse_phase_sd < 0.0 || common_detuning_fwhm < 0.0 ||
      seconds_per_pi_pulse < 0.0)
    throw std::invalid_argument("NoiseModel: spreads must be >= 0");
  if (redraw_block < 1) throw std::invalid_argument("NoiseModel: redraw_block must be >= 1");
  detection.validate();
}

bool NoiseModel::is_ideal() const {
  return pulse_angle_sd == 0.0 && pulse_phase_sd == 0.0 && common_detuning_fwhm == 0.0 &&
         detection.bright_error == 0.0 && detection.dark_error == 0.0 &&
         contrast_sigma_t <= 0.0;
}

NoiseModel NoiseModel::calibrated() {
  // Derived with tools/noise_calibration.cpp; reproduces S_5(theta_5) within
  // the -3.915(14) reference band at n = 10^4. Detection rates and detuning
  // are the apparatus-level figures; angle jitter carries the calibration.
  NoiseModel m;
  m.pulse_angle_sd = 0.048;
  m.pulse_phase_sd = 0.015;
  m.common_detuning_fwhm = 230.0;
  m.seconds_per_pi_pulse = 20e-6;
  m.detection = {2e-5, 1e-4};
  m.contrast_sigma_t = 1.6e-3;
  return m;
}

void RunPlan::validate() const {
  config.validate();
  if (!order_normal && !order_reverse)
    throw std::invalid_argument("RunPlan: at least one order required");
  if (n_per_pair < 1) throw std::invalid_argument("RunPlan: n_per_pair must be >= 1");
  if (threads < 1) throw std::invalid_argument("RunPlan: threads must be >= 1");
  noise.validate();
}

PairDistribution ideal_pair_distribution(const NgonConfig& config, int i, Order order) {
  const int j = second_index(config.n_obs, i, order);
  return sequence_distribution(compose(first_rotation_pulses(config, i)),
                               transition_unitary(config, i, j));
}

PairDistribution noisy_pair_distribution(const NgonConfig& config, int i, Order order,
                                         const NoiseModel& noise, RandomStream& noise_rng) {
  const int j = second_index(config.n_obs, i, order);
  const double detuning_sd = noise.common_detuning_fwhm / kFwhmToSd;
  const double detuning = detuning_sd > 0.0 ? detuning_sd * noise_rng.next_normal() : 0.0;
  double duration = 0.0;
  const std::vector<Pulse> leg1 =
      perturb(first_rotation_pulses(config, i), noise, detuning, noise_rng, duration);
  // detection window adds to the sequence duration; folded into per-pulse
  // time here since only the total enters the contrast factor
  const std::vector<Pulse> leg2 =
      perturb(transition_pulses(config, i, j), noise, detuning, noise_rng, duration);
  PairDistribution d = sequence_distribution(compose(leg1), compose(leg2));
  if (noise.contrast_sigma_t > 0.0 && duration > 0.0) {
    const double c = std::exp(-duration * duration / (2.0 * noise.contrast_sigma_t * noise.contrast_sigma_t));
    d = mix_with_marginal_product(d, c);
  }
  return apply_detection_error(d, noise.detection);
}

std::vector<ShotRecord> sample_pair(const RunPlan& plan, int i, Order order) {
  plan.validate();
  const NgonConfig& config = plan.config;
  const int j = second_index(config.n_obs, i, order);
  const std::uint64_t order_tag = order == Order::Normal ? 0 : 1;

  std::vector<ShotRecord> records;
  records.reserve(plan.n_per_pair);

  PairDistribution dist;  // reused across a noise block
  bool have_dist = false;
  for (long rep = 0; rep < plan.n_per_pair; ++rep) {
    if (!plan.noise.is_ideal()) {
      const long block = rep - rep % plan.noise.redraw_block;
      if (!have_dist || rep % plan.noise.redraw_block == 0) {
        RandomStream noise_rng(stream_key(plan.seed, static_cast<std::uint64_t>(config.n_obs),
                                          static_cast<std::uint64_t>(plan.theta_index),
                                          static_cast<std::uint64_t>(i), order_tag,
                                          static_cast<std::uint64_t>(block), kNoiseStream));
        dist = noisy_pair_distribution(config, i, order, plan.noise, noise_rng);
        have_dist = true;
      }
    } else if (!have_dist) {
      dist = ideal_pair_distribution(config, i, order);
      have_dist = true;
    }
    RandomStream outcome_rng(stream_key(plan.seed, static_cast<std::uint64_t>(config.n_obs),
                                        static_cast<std::uint64_t>(plan.theta_index),
                                        static_cast<std::uint64_t>(i), order_tag,
                                        static_cast<std::uint64_t>(rep), kOutcomeStream));
    const auto [a1, a2] = draw_outcome(dist, outcome_rng);
    records.push_back({config.n_obs, config.theta, i, j, order, rep, a1, a2});
  }
  return records;
}

std::vector<ShotRecord> run(const RunPlan& plan) {
  plan.validate();
  std::vector<Order> orders;
  if (plan.order_normal) orders.push_back(Order::Normal);
  if (plan.order_reverse) orders.push_back(Order::Reverse);

  struct Task {
    int i;
    Order order;
  };
  std::vector<Task> tasks;
  for (Order order : orders)
    for (int i = 1; i <= plan.config.n_obs; ++i) tasks.push_back({i, order});

  std::vector<std::vector<ShotRecord>> slots(tasks.size());
  const int workers = std::min<int>(plan.threads, static_cast<int>(tasks.size()));
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t)
      slots[t] = sample_pair(plan, tasks[t].i, tasks[t].order);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < tasks.size(); t += workers)
          slots[t] = sample_pair(plan, tasks[t].i, tasks[t].order);
      });
    }
    for (std::thread& th : pool) th.join();
  }

  std::vector<ShotRecord> out;
  out.reserve(tasks.size() * plan.n_per_pair);
  for (std::vector<ShotRecord>& slot : slots)  // order-preserving merge
    out.insert(out.end(), slot.begin(), slot.end());
  return out;
}

std::vector<std::pair<double, std::vector<ShotRecord>>> theta_scan(
    const RunPlan& base_plan, std::span<const double> theta_values) {
  if (theta_values.empty()) throw std::invalid_argument("theta_scan: empty theta list");
  std::vector<std::pair<double, std::vector<ShotRecord>>> out;
  int index = 0;
  for (double theta : theta_values) {
    RunPlan plan = base_plan;
    plan.config.theta = theta;
    plan.theta_index = index++;
    out.emplace_back(theta, run(plan));
  }
  return out;
}

}  // namespace kcbs
