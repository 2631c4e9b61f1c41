#pragma once

// Closed-form predictions and bounds for the N-cycle witnesses, the
// folded-normal shot-noise expectation, the theta estimator, and a
// brute-force classical oracle.

#include <vector>

namespace kcbs {

/// Classical (NC), quantum, no-signaling and Bell-scenario bounds on S_N.
struct BoundSet {
  double nc;    // -N + 2
  double qm;    // (N - 3N cos(pi/N)) / (1 + cos(pi/N))
  double ns;    // -N, also the algebraic limit
  double bell;  // N - 4 [1/2 + (N-1)/4 (1 + cos(pi/(N-1)))]
};

BoundSet bounds(int n_obs);  // odd N >= 5

/// S_5(theta) = 5 (3 - sqrt5 + (5 + sqrt5) cos 4 theta) / 8.
double s5_theory(double theta);

/// Single signaling term |<A_i^(1)> - <A_i^(2)>| in closed form:
/// |(5 - sqrt5 + 5 (3 + sqrt5) cos 2 theta) sin^2 2 theta| / 16.
double epsilon_theory(double theta);

/// S_5 + 5 epsilon_i.
double s5_ext_theory(double theta);

/// Mean of |X|, X ~ Normal(mu, sigma^2). Uses std::erf (glibc libm,
/// < 1e-15 relative error). sigma = 0 degenerates to |mu|.
double folded_normal_mean(double mu, double sigma);

/// E(eps_i) for n repetitions: folded-normal mean at the analytic eps_i with
/// shot-noise variance sigma^2_{A} = (1 - <A>^2)/n per marginal.
double expected_epsilon(double theta, long n);

/// theta = arccos(mean of first-slot marginals) / 2.
double theta_estimate(const std::vector<double>& first_marginals);

/// Exhaustive 2^N minimum of the cyclic correlator sum; N <= 25.
/// Even N allowed for test purposes (reaches -N).
double classical_bound_bruteforce(int n_obs);

/// Analytic witness triple for general odd N; values away from closed forms
/// are taken from the exact measurement engine (not sampled).
struct NgonTheory {
  double s;        // S_N
  double epsilon;  // single eps_i term
  double s_ext;    // S_N + N eps_i
};

NgonTheory ngon_theory(int n_obs, double theta);

}  // namespace kcbs
