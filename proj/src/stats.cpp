#include "kcbs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace kcbs {

const char* to_string(Order order) { return order == Order::Normal ? "normal" : "reverse"; }

namespace {

struct Accum {
  long n = 0;
  double sum_a1 = 0, sum_a2 = 0, sum_corr = 0;
  double sumsq_a1 = 0, sumsq_a2 = 0, sumsq_corr = 0;

  void add(int a1, int a2) {
    const double c = static_cast<double>(a1) * a2;
    ++n;
    sum_a1 += a1;
    sum_a2 += a2;
    sum_corr += c;
    sumsq_a1 += static_cast<double>(a1) * a1;
    sumsq_a2 += static_cast<double>(a2) * a2;
    sumsq_corr += c * c;
  }
};

// Sample sd with the n-1 convention, over sqrt(n).
double standard_error(double sum, double sumsq, long n) {
  if (n < 2) return 0.0;
  const double mean = sum / n;
  double var = (sumsq - n * mean * mean) / (n - 1);
  if (var < 0.0) var = 0.0;  // rounding at zero variance
  return std::sqrt(var / n);
}

double hypot_sum(std::span<const double> ses) {
  double s = 0.0;
  for (double se : ses) s += se * se;
  return std::sqrt(s);
}

}  // namespace

std::vector<PairStats> aggregate(std::span<const ShotRecord> records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  const ShotRecord& first = records.front();
  const int n_obs = first.n_obs;
  std::map<std::pair<int, int>, Accum> acc;
  for (const ShotRecord& r : records) {
    if (r.n_obs != n_obs || r.theta_set != first.theta_set || r.order != first.order)
      throw std::invalid_argument("aggregate: mixed configurations in record set");
    if (std::abs(r.a1) != 1 || std::abs(r.a2) != 1)
      throw std::invalid_argument("aggregate: outcomes must be ±1");
    const int expected_j =
        first.order == Order::Normal ? r.i % n_obs + 1 : (r.i - 2 + n_obs) % n_obs + 1;
    if (r.i < 1 || r.i > n_obs || r.j != expected_j)
      throw std::invalid_argument("aggregate: pair indices inconsistent with order");
    acc[{r.i, r.j}].add(r.a1, r.a2);
  }
  std::vector<int> missing;
  for (int i = 1; i <= n_obs; ++i) {
    const int j = first.order == Order::Normal ? i % n_obs + 1 : (i - 2 + n_obs) % n_obs + 1;
    if (!acc.contains({i, j})) missing.push_back(i);
  }
  if (!missing.empty()) {
    std::string what = "aggregate: incomplete dataset, missing first indices:";
    for (int i : missing) what += " " + std::to_string(i);
    throw IncompleteDatasetError(what, missing);
  }
  std::vector<PairStats> out;
  out.reserve(acc.size());
  for (const auto& [key, a] : acc) {
    PairStats s;
    s.i = key.first;
    s.j = key.second;
    s.order = first.order;
    s.n = a.n;
    s.mean_a1 = a.sum_a1 / a.n;
    s.mean_a2 = a.sum_a2 / a.n;
    s.mean_corr = a.sum_corr / a.n;
    s.se_a1 = standard_error(a.sum_a1, a.sumsq_a1, a.n);
    s.se_a2 = standard_error(a.sum_a2, a.sumsq_a2, a.n);
    s.se_corr = standard_error(a.sum_corr, a.sumsq_corr, a.n);
    out.push_back(s);
  }
  return out;
}

WitnessReport witness(const std::vector<PairStats>& stats, const BoundSet& b) {
  if (stats.empty()) throw std::invalid_argument("witness: no pair statistics");
  const int n_obs = static_cast<int>(stats.size());
  // mean/se of <A_i^(1)> keyed by first index, <A_i^(2)> keyed by second.
  std::map<int, std::pair<double, double>> first_slot, second_slot;
  for (const PairStats& s : stats) {
    first_slot[s.i] = {s.mean_a1, s.se_a1};
    second_slot[s.j] = {s.mean_a2, s.se_a2};
  }
  if (static_cast<int>(first_slot.size()) != n_obs ||
      static_cast<int>(second_slot.size()) != n_obs)
    throw std::invalid_argument("witness: pair set does not cover all observables");

  WitnessReport r;
  r.n_obs = n_obs;
  r.order = stats.front().order;
  r.bounds = b;

  double s_sum = 0.0;
  std::vector<double> se_corr;
  for (const PairStats& s : stats) {
    s_sum += s.mean_corr;
    se_corr.push_back(s.se_corr);
  }
  r.s = {s_sum, hypot_sum(se_corr)};

  double eps_sum = 0.0;
  std::vector<double> se_eps;
  std::vector<double> marginals;
  for (int i = 1; i <= n_obs; ++i) {
    const auto [m1, se1] = first_slot.at(i);
    const auto [m2, se2] = second_slot.at(i);
    const double eps = std::abs(m1 - m2);
    r.epsilon_terms.push_back(eps);
    eps_sum += eps;
    se_eps.push_back(std::hypot(se1, se2));
    marginals.push_back(m1);
  }
  r.epsilon_sum = {eps_sum, hypot_sum(se_eps)};
  r.epsilon_noise_dominated = eps_sum < 2.0 * r.epsilon_sum.se;
  r.s_ext = {s_sum + eps_sum, std::hypot(r.s.se, r.epsilon_sum.se)};

  double mean_m = 0.0, var_m = 0.0;
  for (int i = 1; i <= n_obs; ++i) {
    mean_m += marginals[i - 1] / n_obs;
    var_m += first_slot.at(i).second * first_slot.at(i).second / (n_obs * n_obs);
  }
  r.theta_est.value = theta_estimate(marginals);
  // d theta / d mean = -1 / (2 sqrt(1 - mean^2)); degenerate at |mean| = 1.
  const double denom = 2.0 * std::sqrt(std::max(1.0 - mean_m * mean_m, 0.0));
  r.theta_est.se = denom > 0.0 ? std::sqrt(var_m) / denom : 0.0;

  const double cf_denom = b.ns - b.nc;  // = -2 always
  r.cf = {(s_sum - b.nc) / cf_denom, r.s.se / std::abs(cf_denom)};

  const double qm_gap = b.qm - b.nc;
  r.saturation = {(s_sum - b.nc) / qm_gap, r.s.se / std::abs(qm_gap)};
  // positive convention: epsilon is non-negative, gap measured as nc - qm > 0
  r.normalized_signaling = {eps_sum / std::abs(qm_gap), r.epsilon_sum.se / std::abs(qm_gap)};
  return r;
}

std::pair<Measured, Measured> comparison_metrics(const WitnessReport& report) {
  const double qm_gap = report.bounds.qm - report.bounds.nc;
  Measured saturation{(report.s.value - report.bounds.nc) / qm_gap,
                      report.s.se / std::abs(qm_gap)};
  Measured signaling{report.epsilon_sum.value / std::abs(qm_gap),
                     report.epsilon_sum.se / std::abs(qm_gap)};
  return {saturation, signaling};
}

std::pair<double, double> violation_significance(const WitnessReport& report) {
  if (report.s.se <= 0.0 || report.s_ext.se <= 0.0)
    throw std::invalid_argument("violation_significance: zero standard error");
  return {(report.bounds.nc - report.s.value) / report.s.se,
          (report.bounds.nc - report.s_ext.value) / report.s_ext.se};
}

}  // namespace kcbs
