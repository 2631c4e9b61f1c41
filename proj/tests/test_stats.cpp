#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "kcbs/ngon.hpp"
#include "kcbs/stats.hpp"
#include "kcbs/theory.hpp"

using namespace kcbs;

namespace {

// Dataset where every pair shows the same four counts; lets us compare the
// aggregate against hand-computed means.
std::vector<ShotRecord> uniform_dataset(int n_obs, const std::array<long, 4>& counts,
                                        Order order = Order::Normal) {
  std::vector<ShotRecord> records;
  const double theta = compatibility_angle(n_obs);
  for (int i = 1; i <= n_obs; ++i) {
    const int j = order == Order::Normal ? i % n_obs + 1 : (i - 2 + n_obs) % n_obs + 1;
    long rep = 0;
    const int signs[4][2] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
    for (int k = 0; k < 4; ++k)
      for (long c = 0; c < counts[k]; ++c)
        records.push_back({n_obs, theta, i, j, order, rep++, signs[k][0], signs[k][1]});
  }
  return records;
}

// A report with prescribed per-pair means, zero width.
WitnessReport report_from_means(int n_obs, double corr, double eps, double se) {
  std::vector<ShotRecord> records;
  (void)records;
  WitnessReport r;
  r.n_obs = n_obs;
  r.order = Order::Normal;
  r.bounds = bounds(n_obs);
  r.s = {n_obs * corr, se};
  r.epsilon_terms.assign(n_obs, eps);
  r.epsilon_sum = {n_obs * eps, se};
  r.s_ext = {r.s.value + r.epsilon_sum.value, std::sqrt(2.0) * se};
  r.cf = {(r.s.value - r.bounds.nc) / (r.bounds.ns - r.bounds.nc), se / 2.0};
  return r;
}

}  // namespace

TEST_CASE("aggregate: hand-computed two-record pair") {
  // one pair, records (+1,+1) and (-1,+1): mean_a1 = 0, sd = sqrt(2), se = 1
  std::vector<ShotRecord> records{
      {5, 0.8, 1, 2, Order::Normal, 0, +1, +1},
      {5, 0.8, 1, 2, Order::Normal, 1, -1, +1},
  };
  // other pairs must exist; pad them with constant outcomes
  for (int i = 2; i <= 5; ++i) {
    records.push_back({5, 0.8, i, i % 5 + 1, Order::Normal, 0, +1, -1});
    records.push_back({5, 0.8, i, i % 5 + 1, Order::Normal, 1, +1, -1});
  }
  const auto stats = aggregate(records);
  REQUIRE(stats.size() == 5);
  const PairStats& p = stats.front();
  CHECK(p.i == 1);
  CHECK(p.j == 2);
  CHECK(p.n == 2);
  CHECK(p.mean_a1 == doctest::Approx(0.0));
  CHECK(p.mean_a2 == doctest::Approx(1.0));
  CHECK(p.mean_corr == doctest::Approx(0.0));
  CHECK(p.se_a1 == doctest::Approx(1.0));      // sqrt(2)/sqrt(2)
  CHECK(p.se_a2 == doctest::Approx(0.0));
  CHECK(p.se_corr == doctest::Approx(1.0));
  // constant pairs have zero error
  CHECK(stats[1].se_corr == doctest::Approx(0.0));
  CHECK(stats[1].mean_corr == doctest::Approx(-1.0));
}

TEST_CASE("aggregate rejects defective datasets") {
  auto records = uniform_dataset(5, {10, 0, 0, 10});
  // a missing pair is reported by first index
  std::vector<ShotRecord> missing;
  for (const auto& r : records)
    if (r.i != 3) missing.push_back(r);
  try {
    aggregate(missing);
    FAIL("expected IncompleteDatasetError");
  } catch (const IncompleteDatasetError& e) {
    REQUIRE(e.missing.size() == 1);
    CHECK(e.missing[0] == 3);
  }

  // outcome values other than +-1
  auto bad = records;
  bad[0].a1 = 0;
  CHECK_THROWS_AS(aggregate(bad), std::invalid_argument);

  // mixed theta
  auto mixed = records;
  mixed[0].theta_set += 0.1;
  CHECK_THROWS_AS(aggregate(mixed), std::invalid_argument);

  // wrong partner index for the declared order
  auto wrong = records;
  wrong[0].j = 3;
  CHECK_THROWS_AS(aggregate(wrong), std::invalid_argument);

  CHECK_THROWS_AS(aggregate(std::vector<ShotRecord>{}), std::invalid_argument);
}

TEST_CASE("aggregate handles reverse order partner convention") {
  const auto records = uniform_dataset(5, {5, 5, 5, 5}, Order::Reverse);
  const auto stats = aggregate(records);
  REQUIRE(stats.size() == 5);
  for (const auto& p : stats) {
    CHECK(p.j == (p.i - 2 + 5) % 5 + 1);
    CHECK(p.order == Order::Reverse);
    CHECK(p.mean_corr == doctest::Approx(0.0));
  }
}

TEST_CASE("witness on a deterministic dataset") {
  // all outcomes (+1,-1): correlator -1 per pair, S = -5, eps_i = 2 each
  const auto stats = aggregate(uniform_dataset(5, {0, 10, 0, 0}));
  const auto r = witness(stats, bounds(5));
  CHECK(r.s.value == doctest::Approx(-5.0));
  CHECK(r.s.se == doctest::Approx(0.0));
  REQUIRE(r.epsilon_terms.size() == 5);
  // <A_i^(1)> = +1 and <A_i^(2)> = -1 for every i
  for (double e : r.epsilon_terms) CHECK(e == doctest::Approx(2.0));
  CHECK(r.epsilon_sum.value == doctest::Approx(10.0));
  CHECK(r.s_ext.value == doctest::Approx(5.0));
  // CF of the bare witness: (-5 - (-3)) / (-5 - (-3)) = 1
  CHECK(r.cf.value == doctest::Approx(1.0));
  // theta estimate: first marginal +1 -> theta 0
  CHECK(r.theta_est.value == doctest::Approx(0.0));
}

TEST_CASE("witness near ideal pentagon statistics") {
  // counts matched to the ideal distribution at theta_5 (n = 10^5 per pair):
  // p(+,+) = 0, p(+,-) = cos^2 t5, p(-,+) from symmetry, rest fills in.
  const double c2 = std::pow(std::cos(compatibility_angle(5)), 2);  // 0.4472
  const long n = 100000;
  const long npm = std::lround(n * c2);
  const std::array<long, 4> counts{0, npm, npm, n - 2 * npm};
  const auto r = witness(aggregate(uniform_dataset(5, counts)), bounds(5));
  // correlator = 1 - 4 cos^2/ ... within rounding of the count grid
  CHECK(r.s.value == doctest::Approx(5.0 - 4.0 * std::sqrt(5.0)).epsilon(2e-4));
  CHECK(r.epsilon_sum.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.theta_est.value == doctest::Approx(compatibility_angle(5)).epsilon(1e-4));
  CHECK(r.cf.value == doctest::Approx(2.0 * std::sqrt(5.0) - 4.0).epsilon(5e-4));
  CHECK(r.saturation.value == doctest::Approx(1.0).epsilon(5e-4));
  CHECK(r.epsilon_noise_dominated);  // exact zero signaling
}

TEST_CASE("reference witness values reproduce the reference totals") {
  // normal order: S = -3.915(14), ext = -3.864(34)
  WitnessReport r = report_from_means(5, -3.915 / 5.0, (3.915 - 3.864) / 5.0, 0.014);
  const auto [bare, ext] = violation_significance(r);
  CHECK(bare == doctest::Approx((3.915 - 3.0) / 0.014).epsilon(1e-12));  // 65.4 sigma
  CHECK(bare > 65.0);
  r.s_ext.se = 0.034;
  const auto [bare2, ext2] = violation_significance(r);
  CHECK(ext2 == doctest::Approx((3.864 - 3.0) / 0.034).epsilon(1e-12));  // 25.4 sigma
  CHECK(ext2 > 25.0);

  const auto [sat, sig] = comparison_metrics(r);
  const double qm_gap = std::abs(bounds(5).qm - bounds(5).nc);  // 0.9443
  CHECK(sat.value == doctest::Approx((3.915 - 3.0) / qm_gap).epsilon(1e-12));  // 0.969
  CHECK(sat.value == doctest::Approx(0.969).epsilon(2e-3));
  CHECK(sig.value == doctest::Approx(0.051 / qm_gap).epsilon(2e-2));  // 0.054
  CHECK(sig.value > 0.0);
}

TEST_CASE("violation significance guards zero errors") {
  WitnessReport r = report_from_means(5, -0.78, 0.0, 0.0);
  CHECK_THROWS_AS(violation_significance(r), std::invalid_argument);
}
