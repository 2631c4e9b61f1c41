#pragma once

// Monte Carlo shot generation: seeded sampling from exact pair
// distributions, optionally perturbed by a pulse-level noise model.

#include <cstdint>
#include <utility>
#include <vector>

#include "kcbs/measurement.hpp"
#include "kcbs/ngon.hpp"
#include "kcbs/rng.hpp"
#include "kcbs/stats.hpp"

namespace kcbs {

/// Pulse-level noise: independent Gaussian jitter of every elementary
/// pulse's angle and phase, a common detuning drawn per realization that
/// accumulates as a phase walk scaled by pulse duration, classical detection
/// flips, and an optional contrast decay on the pair correlator.
struct NoiseModel {
  double pulse_angle_sd = 0.0;        // rad, absolute, per pulse
  double pulse_phase_sd = 0.0;        // rad, per pulse
  double common_detuning_fwhm = 0.0;  // Hz; sd = FWHM / 2.355
  double seconds_per_pi_pulse = 0.0;  // pulse duration scale
  DetectionError detection{};
  double contrast_sigma_t = 0.0;      // s; <= 0 disables contrast decay
  // Noise realizations are redrawn every redraw_block repetitions
  // (1 = fast noise, the default; larger = slow noise).
  long redraw_block = 1;

  void validate() const;
  bool is_ideal() const;

  static NoiseModel ideal() { return {}; }
  /// Preset tuned so that simulated S_5 at theta_5, n = 10^4, lands within
  /// the reference band -3.915(14); see tools/noise_calibration.cpp.
  static NoiseModel calibrated();
};

inline constexpr double kFwhmToSd = 2.355;

struct RunPlan {
  NgonConfig config;
  bool order_normal = true;
  bool order_reverse = false;
  long n_per_pair = 10000;
  std::uint64_t seed = 0;
  NoiseModel noise{};
  int theta_index = 0;  // set by theta_scan
  int threads = 1;

  void validate() const;
};

/// Exact outcome distribution of one noiseless pair measurement of the plan.
PairDistribution ideal_pair_distribution(const NgonConfig& config, int i, Order order);

/// One noise realization of the pair distribution (pulse-perturbed sequence,
/// contrast decay, detection flips folded in).
PairDistribution noisy_pair_distribution(const NgonConfig& config, int i, Order order,
                                         const NoiseModel& noise, RandomStream& noise_rng);

/// n_per_pair records for observable pair (i, i±1). Deterministic in
/// (seed, n_obs, theta_index, i, order, rep) via counter-based streams.
std::vector<ShotRecord> sample_pair(const RunPlan& plan, int i, Order order);

/// All pairs, all requested orders (i = 1..N, Normal before Reverse).
/// Identical plans produce identical datasets for any thread count.
std::vector<ShotRecord> run(const RunPlan& plan);

/// Runs the plan once per theta value; theta_index tags the RNG streams.
std::vector<std::pair<double, std::vector<ShotRecord>>> theta_scan(
    const RunPlan& base_plan, std::span<const double> theta_values);

}  // namespace kcbs
