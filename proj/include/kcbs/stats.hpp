#pragma once

// Witness estimation from finite shot data: per-pair sample means and
// standard errors, S_N, signaling terms, extended witness, theta estimate,
// contextual fraction, and comparison metrics.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcbs/theory.hpp"

namespace kcbs {

enum class Order { Normal, Reverse };

const char* to_string(Order order);

/// One repetition's outcome pair.
struct ShotRecord {
  int n_obs;
  double theta_set;
  int i;  // first-measured observable, 1-based
  int j;  // second-measured observable, i±1 mod N per order
  Order order;
  long rep;
  int a1;  // ±1
  int a2;  // ±1
};

/// Aggregated statistics of one (i, j) pair.
struct PairStats {
  int i;
  int j;
  Order order;
  long n;
  double mean_a1, mean_a2, mean_corr;
  double se_a1, se_a2, se_corr;  // sample sd (n-1) / sqrt(n)
};

struct IncompleteDatasetError : std::runtime_error {
  explicit IncompleteDatasetError(std::string what, std::vector<int> missing_first)
      : std::runtime_error(std::move(what)), missing(std::move(missing_first)) {}
  std::vector<int> missing;  // first indices of absent pairs
};

/// Per-pair means and standard errors. All records must share
/// (n_obs, theta_set, order) and every adjacent pair must be present.
std::vector<PairStats> aggregate(std::span<const ShotRecord> records);

/// A value with its propagated standard error.
struct Measured {
  double value = 0.0;
  double se = 0.0;
};

struct WitnessReport {
  int n_obs;
  Order order;
  Measured theta_est;
  Measured s;                          // S_N
  std::vector<double> epsilon_terms;   // eps_i, indexed by observable i
  Measured epsilon_sum;
  Measured s_ext;                      // S_N + sum eps_i
  Measured cf;                         // contextual fraction of the bare S_N
  BoundSet bounds;
  Measured saturation;                 // (S_N - nc)/(qm - nc)
  Measured normalized_signaling;       // sum eps_i / |qm - nc|
  // Folded-normal skew: the standard error of eps is not a confidence
  // interval when the sum is within 2 se of zero.
  bool epsilon_noise_dominated = false;
};

/// Builds the full report. eps_i pairs <A_i^(1)> from the pair where i is
/// measured first with <A_i^(2)> from the pair where i is measured second;
/// this works identically for normal and reverse order datasets.
WitnessReport witness(const std::vector<PairStats>& stats, const BoundSet& b);

/// Saturation and normalized signaling, recomputed from the report.
std::pair<Measured, Measured> comparison_metrics(const WitnessReport& report);

/// Standard deviations of violation below the classical bound for the bare
/// and extended witness. Throws on zero standard error.
std::pair<double, double> violation_significance(const WitnessReport& report);

}  // namespace kcbs
