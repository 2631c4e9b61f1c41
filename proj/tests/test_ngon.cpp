#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kcbs/ngon.hpp"

using namespace kcbs;
using std::numbers::pi;

namespace {

NgonConfig cfg(int n, double theta, SequenceMode mode = SequenceMode::Block) {
  return {n, theta, mode};
}

double overlap2(const Ket3& a, const Ket3& b) { return a.fidelity(b); }

}  // namespace

TEST_CASE("compatibility angle") {
  // arccos(5^(-1/4)) for the pentagon
  CHECK(compatibility_angle(5) == doctest::Approx(0.8382831191721176).epsilon(1e-14));
  CHECK(std::cos(compatibility_angle(5)) ==
        doctest::Approx(std::pow(5.0, -0.25)).epsilon(1e-14));
  // generic formula value
  const double c7 = std::cos(pi / 7.0);
  CHECK(compatibility_angle(7) ==
        doctest::Approx(std::acos(std::sqrt(c7 / (1.0 + c7)))).epsilon(1e-14));
  // theta_N decreases towards pi/4 from above
  CHECK(compatibility_angle(121) > pi / 4.0);
  CHECK(compatibility_angle(121) < compatibility_angle(5));
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(cfg(4, 0.5).validate(), std::invalid_argument);   // even
  CHECK_THROWS_AS(cfg(3, 0.5).validate(), std::invalid_argument);   // too small
  CHECK_THROWS_AS(cfg(5, -0.1).validate(), std::invalid_argument);  // angle range
  CHECK_THROWS_AS(cfg(5, 1.7).validate(), std::invalid_argument);
  CHECK_NOTHROW(cfg(5, pi / 2.0).validate());
}

TEST_CASE("rz exponents walk every second vertex") {
  // (i-1)(N-1)/2 mod N for N = 5: 0 2 4 1 3
  const int expected[] = {0, 2, 4, 1, 3};
  for (int i = 1; i <= 5; ++i) CHECK(rz_exponent(5, i) == expected[i - 1]);
  // exponents for a full cycle are a permutation of 0..N-1 (all N distinct)
  for (int n : {5, 7, 11}) {
    std::vector<bool> seen(n, false);
    for (int i = 1; i <= n; ++i) seen[rz_exponent(n, i)] = true;
    for (int m = 0; m < n; ++m) CHECK(seen[m]);
  }
}

TEST_CASE("first state is the opened |0>") {
  const double theta = 0.7;
  const NgonFrame f = build_frame(cfg(5, theta));
  const Ket3 expected(Vector3(std::cos(theta), std::sin(theta), 0.0));
  CHECK(overlap2(f.states[0], expected) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adjacent states are orthogonal exactly at the compatibility angle") {
  for (int n : {5, 7, 11, 17, 31, 61, 121}) {
    const NgonFrame f = build_frame(cfg(n, compatibility_angle(n)));
    for (int i = 0; i < n; ++i) {
      CHECK(overlap2(f.states[i], f.states[(i + 1) % n]) == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
  // and not orthogonal away from it
  const NgonFrame f = build_frame(cfg(5, compatibility_angle(5) + 0.2));
  CHECK(overlap2(f.states[0], f.states[1]) > 1e-3);
}

TEST_CASE("cyclic symmetry: every adjacent overlap is equal") {
  for (int n : {5, 9, 15, 31}) {
    const NgonFrame f = build_frame(cfg(n, 0.6));
    const double first = overlap2(f.states[0], f.states[1]);
    for (int i = 1; i < n; ++i) {
      CHECK(overlap2(f.states[i], f.states[(i + 1) % n]) ==
            doctest::Approx(first).epsilon(1e-10));
    }
  }
}

TEST_CASE("pulse decomposition reproduces the frame unitary") {
  for (int n : {5, 7, 11}) {
    const NgonConfig c = cfg(n, 0.5);
    const NgonFrame f = build_frame(c);
    for (int i = 1; i <= n; ++i) {
      const Unitary3 u = compose(pulse_decomposition(c, i));
      // same action on |0> (global phase cannot differ here: entries real)
      CHECK((u.matrix() - f.unitaries[i - 1].matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("block and concatenated transitions agree") {
  for (int n : {5, 7, 11}) {
    const double theta = compatibility_angle(n);
    for (int i = 1; i <= n; ++i) {
      for (int j : {i % n + 1, (i - 2 + n) % n + 1}) {
        const Unitary3 ub = transition_unitary(cfg(n, theta, SequenceMode::Block), i, j);
        const Unitary3 uc = transition_unitary(cfg(n, theta, SequenceMode::Concatenated), i, j);
        CHECK((ub.matrix() - uc.matrix()).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("transition pulses realize the transition unitary") {
  for (SequenceMode mode : {SequenceMode::Block, SequenceMode::Concatenated}) {
    for (int n : {5, 9}) {
      const NgonConfig c = cfg(n, 0.8, mode);
      for (int i = 1; i <= n; ++i) {
        const int j = i % n + 1;
        const Unitary3 u = compose(transition_pulses(c, i, j));
        CHECK((u.matrix() - transition_unitary(c, i, j).matrix()).cwiseAbs().maxCoeff() <
              1e-10);
      }
    }
  }
}

TEST_CASE("first rotation pulses prepare the first detection") {
  const NgonFrame f = build_frame(cfg(7, 0.6));
  // block mode realizes the full inverse: |psi_i> comes back to |0>
  for (int i = 1; i <= 7; ++i) {
    const Unitary3 u = compose(first_rotation_pulses(cfg(7, 0.6, SequenceMode::Block), i));
    const Ket3 back = u * f.states[i - 1];
    CHECK(back.fidelity(Ket3::basis(0)) == doctest::Approx(1.0).epsilon(1e-10));
  }
  // concatenated mode drops the part acting trivially on the initial |0>:
  // only the action on |0> is preserved, which fixes the detection statistics
  for (int i = 1; i <= 7; ++i) {
    const Unitary3 uc = compose(first_rotation_pulses(cfg(7, 0.6, SequenceMode::Concatenated), i));
    const Unitary3 ub = compose(first_rotation_pulses(cfg(7, 0.6, SequenceMode::Block), i));
    const double pc = std::norm((Ket3::basis(0).amplitudes().adjoint() *
                                 (uc * Ket3::basis(0)).amplitudes())(0));
    const double pb = std::norm((Ket3::basis(0).amplitudes().adjoint() *
                                 (ub * Ket3::basis(0)).amplitudes())(0));
    CHECK(pc == doctest::Approx(pb).epsilon(1e-10));
  }
}

TEST_CASE("pulse budget: concatenation wins and block grows quadratically") {
  for (int n : {7, 11, 31, 121}) {
    const std::size_t block = total_pulses_all_pairs(cfg(n, 0.5, SequenceMode::Block));
    const std::size_t concat = total_pulses_all_pairs(cfg(n, 0.5, SequenceMode::Concatenated));
    CHECK(concat < block);
  }
  // block totals scale ~quadratically: ratio of N=62-gon-ish check via odd N
  const auto b11 = total_pulses_all_pairs(cfg(11, 0.5, SequenceMode::Block));
  const auto b121 = total_pulses_all_pairs(cfg(121, 0.5, SequenceMode::Block));
  CHECK(b121 > 50 * b11);  // quadratic-ish growth (121/11)^2 = 121
  // concatenated totals stay close to linear-plus-half-quadratic
  const auto c121 = total_pulses_all_pairs(cfg(121, 0.5, SequenceMode::Concatenated));
  CHECK(c121 < b121 / 2);
}

TEST_CASE("pulse_count honors repeats") {
  const std::vector<Pulse> seq{{Transition::T1, 0.1, 0.0, 3}, {Transition::T2, 0.2, 0.0, 1}};
  CHECK(pulse_count(seq) == 4);
}
