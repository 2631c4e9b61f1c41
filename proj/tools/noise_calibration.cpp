// Scans the per-pulse angle-jitter scale and reports the resulting S_5 and
// contextual fraction, averaged over an ensemble of seeds.  Used to pick the
// numbers baked into NoiseModel::calibrated().

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <vector>

#include "kcbs/ngon.hpp"
#include "kcbs/simulator.hpp"
#include "kcbs/stats.hpp"
#include "kcbs/theory.hpp"

namespace {

struct Summary {
  double s_mean = 0.0, s_sd = 0.0, cf_mean = 0.0, eps_mean = 0.0;
};

Summary ensemble(int n_obs, const kcbs::NoiseModel& noise, long reps, int n_seeds) {
  kcbs::RunPlan plan;
  plan.config.n_obs = n_obs;
  plan.config.theta = kcbs::compatibility_angle(n_obs);
  plan.config.mode = kcbs::SequenceMode::Concatenated;
  plan.n_per_pair = reps;
  plan.noise = noise;
  plan.threads = 8;

  Summary out;
  std::vector<double> s_values;
  for (int k = 0; k < n_seeds; ++k) {
    plan.seed = 1000 + k;
    const auto records = kcbs::run(plan);
    const auto report = kcbs::witness(kcbs::aggregate(records), kcbs::bounds(n_obs));
    s_values.push_back(report.s.value);
    out.cf_mean += report.cf.value;
    out.eps_mean += report.epsilon_sum.value;
  }
  for (double s : s_values) out.s_mean += s;
  out.s_mean /= s_values.size();
  out.cf_mean /= s_values.size();
  out.eps_mean /= s_values.size();
  for (double s : s_values) out.s_sd += (s - out.s_mean) * (s - out.s_mean);
  out.s_sd = s_values.size() > 1 ? std::sqrt(out.s_sd / (s_values.size() - 1)) : 0.0;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const long reps = argc > 1 ? std::atol(argv[1]) : 10000;
  const int n_seeds = argc > 2 ? std::atoi(argv[2]) : 10;

  std::cout << "# angle_sd  S5_mean  S5_sd  eps_sum  CF5\n";
  for (double sd : {0.0, 0.01, 0.02, 0.025, 0.03, 0.035, 0.04, 0.05}) {
    kcbs::NoiseModel noise = kcbs::NoiseModel::calibrated();
    noise.pulse_angle_sd = sd;
    const Summary s = ensemble(5, noise, reps, n_seeds);
    std::cout << sd << "  " << s.s_mean << "  " << s.s_sd << "  " << s.eps_mean << "  "
              << s.cf_mean << "\n";
  }

  std::cout << "# angle_sd  pi_time_us  S5_mean  S5_sd  |  S121_mean  CF121\n";
  for (double sd : {0.0, 0.02}) {
    for (double us : {30.0, 33.0, 36.0, 40.0}) {
      kcbs::NoiseModel noise = kcbs::NoiseModel::calibrated();
      noise.pulse_angle_sd = sd;
      noise.seconds_per_pi_pulse = us * 1e-6;
      const Summary s5 = ensemble(5, noise, reps, n_seeds);
      const Summary s121 = ensemble(121, noise, reps, 3);
      std::cout << sd << "  " << us << "  " << s5.s_mean << "  " << s5.s_sd << "  |  "
                << s121.s_mean << "  " << s121.cf_mean << "\n";
    }
  }

  std::cout << "# calibrated preset at several N (CF column should flip sign by N=121)\n";
  std::cout << "# n  S_mean  S_sd  eps_sum  CF\n";
  for (int n : {5, 11, 31, 121}) {
    const Summary s = ensemble(n, kcbs::NoiseModel::calibrated(), reps, std::min(n_seeds, 5));
    std::cout << n << "  " << s.s_mean << "  " << s.s_sd << "  " << s.eps_mean << "  "
              << s.cf_mean << "\n";
  }
  return 0;
}
