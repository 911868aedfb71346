#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "picsim/dsl.hpp"
#include "picsim/entanglement.hpp"
#include "picsim/oracle.hpp"
#include "picsim/path_engine.hpp"
#include "picsim/scenarios.hpp"
#include "support/random_circuits.hpp"

using namespace picsim;

namespace {

bool bit_identical(std::complex<double> a, std::complex<double> b) {
  return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

TEST_CASE("joint probabilities at zero phase sum") {
  Circuit c = build_jaeger(0.0, 0.0);
  Amplitude uu = joint_amplitude(c, kPairSource, {"U1", "U2"});
  Amplitude ul = joint_amplitude(c, kPairSource, {"U1", "L2"});
  CHECK(detection_probability(uu) <= 1e-12);
  CHECK(detection_probability(ul) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("joint tables at the canonical phase settings") {
  struct Setting {
    double phi1, phi2;
    double uu, ul, lu, ll;
  };
  const Setting settings[] = {
      {0.0, 0.0, 0.0, 0.5, 0.5, 0.0},
      {kHalfPi, kHalfPi, 0.5, 0.0, 0.0, 0.5},
      {kHalfPi / 2.0, kHalfPi / 2.0, 0.25, 0.25, 0.25, 0.25},
  };
  for (const Setting& s : settings) {
    CAPTURE(s.phi1);
    ProbabilityTable table = jaeger_table(build_jaeger(s.phi1, s.phi2));
    CHECK(std::abs(table.joint[0][0] - s.uu) <= 1e-12);
    CHECK(std::abs(table.joint[0][1] - s.ul) <= 1e-12);
    CHECK(std::abs(table.joint[1][0] - s.lu) <= 1e-12);
    CHECK(std::abs(table.joint[1][1] - s.ll) <= 1e-12);
    CHECK(std::abs(table.joint_sum() - 1.0) <= 1e-12);
    for (const char* d : {"U1", "L1", "U2", "L2"}) {
      CHECK(std::abs(marginal_probability(table, d) - 0.5) <= 1e-12);
    }
  }
}

TEST_CASE("the table depends on the phase sum only") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> phase(0.0, kTau);
  for (int i = 0; i < 24; ++i) {
    double a = phase(rng), b = phase(rng), delta = phase(rng);
    ProbabilityTable t1 = jaeger_table(build_jaeger(a, b));
    ProbabilityTable t2 = jaeger_table(build_jaeger(a + delta, b - delta));
    for (int r = 0; r < 2; ++r) {
      for (int s = 0; s < 2; ++s) {
        CHECK(std::abs(t1.joint[r][s] - t2.joint[r][s]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("the nonlocal sign pattern at phase sums 0 and pi") {
  ProbabilityTable at_zero = jaeger_table(build_jaeger(0.0, 0.0));
  // cos = +1: UU and LL carry the minus sign, UL and LU the plus sign.
  CHECK(std::abs(at_zero.joint[0][0] - 0.0) <= 1e-12);
  CHECK(std::abs(at_zero.joint[0][1] - 0.5) <= 1e-12);
  CHECK(std::abs(at_zero.joint[1][0] - 0.5) <= 1e-12);
  CHECK(std::abs(at_zero.joint[1][1] - 0.0) <= 1e-12);
  ProbabilityTable at_pi = jaeger_table(build_jaeger(kHalfPi, kHalfPi));
  CHECK(std::abs(at_pi.joint[0][0] - 0.5) <= 1e-12);
  CHECK(std::abs(at_pi.joint[0][1] - 0.0) <= 1e-12);
  CHECK(std::abs(at_pi.joint[1][0] - 0.0) <= 1e-12);
  CHECK(std::abs(at_pi.joint[1][1] - 0.5) <= 1e-12);
}

TEST_CASE("partner order commutes bit for bit") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> phase(0.0, kTau);
  for (int i = 0; i < 16; ++i) {
    Circuit c = build_jaeger(phase(rng), phase(rng));
    for (const char* d1 : {"U1", "L1"}) {
      for (const char* d2 : {"U2", "L2"}) {
        Amplitude forward = joint_amplitude(c, kPairSource, {d1, d2}, PartnerOrder::Arm1First);
        Amplitude reversed = joint_amplitude(c, kPairSource, {d1, d2}, PartnerOrder::Arm2First);
        CHECK(bit_identical(forward.value, reversed.value));
      }
    }
  }
}

TEST_CASE("a common phase on one arm's outputs drops out of the table") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> phase(0.0, kTau);
  for (int i = 0; i < 12; ++i) {
    double phi1 = phase(rng), phi2 = phase(rng), delta = phase(rng);
    Circuit base = build_jaeger(phi1, phi2);
    Circuit moved = base;
    moved.segments.push_back({"u2", delta});
    moved.segments.push_back({"l2", delta});
    REQUIRE(validate(moved).empty());
    ProbabilityTable t1 = jaeger_table(base);
    ProbabilityTable t2 = jaeger_table(moved);
    for (int r = 0; r < 2; ++r) {
      for (int s = 0; s < 2; ++s) {
        CHECK(std::abs(t1.joint[r][s] - t2.joint[r][s]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("a branch that cannot reach the detector leaves a one-term product") {
  Circuit c = build_lemos(0.8, /*distinguishable=*/true);
  // Only the top branch reaches the dump detector.
  Amplitude a = joint_amplitude(c, kPairSource, {std::string(kLemosG), std::string(kLemosDump)});
  std::complex<double> signal =
      summed_kernel(c, pair_branch_origin(c, kPairSource, BranchLabel::Top, Arm::Arm1),
                    kLemosG);
  std::complex<double> idler =
      summed_kernel(c, pair_branch_origin(c, kPairSource, BranchLabel::Top, Arm::Arm2),
                    kLemosDump);
  CHECK(std::abs(a.value - kInvSqrt2 * signal * idler) <= 1e-12);
}

TEST_CASE("marginals behave like row and column sums") {
  ProbabilityTable table = jaeger_table(build_jaeger(0.3, 0.4));
  CHECK(marginal_probability(table, "U1") ==
        doctest::Approx(table.joint[0][0] + table.joint[0][1]).epsilon(1e-15));
  CHECK(marginal_probability(table, "L2") ==
        doctest::Approx(table.joint[0][1] + table.joint[1][1]).epsilon(1e-15));
  CHECK_THROWS_AS(marginal_probability(table, "XX"), std::invalid_argument);

  ProbabilityTable degenerate;
  degenerate.arm1 = {"U1", "L1"};
  degenerate.arm2 = {"U2", "L2"};
  degenerate.joint = {{{1.0, 0.0}, {0.0, 0.0}}};
  degenerate.marginals = {{"U1", 1.0}, {"L1", 0.0}, {"U2", 1.0}, {"L2", 0.0}};
  CHECK(marginal_probability(degenerate, "U1") == 1.0);

  // phase sum pi/3: the cosine cancels between the two joint entries
  ProbabilityTable third = jaeger_table(build_jaeger(kTau / 12.0, kTau / 12.0));
  CHECK(std::abs(marginal_probability(third, "U1") - 0.5) <= 1e-12);
}

TEST_CASE("engine argument validation") {
  Circuit c = build_jaeger(0.0, 0.0);
  ParseResult single = parse("source single S out(a)\ndetector D mode(a)\n");
  REQUIRE(single.ok());
  CHECK_THROWS_AS(joint_amplitude(*single.circuit, "S", {"D", "D"}), std::invalid_argument);
  CHECK_THROWS_AS(joint_amplitude(c, kPairSource, {"U1", "L1"}), std::invalid_argument);
  CHECK_THROWS_AS(joint_amplitude(c, kPairSource, {"U1", "XX"}), std::invalid_argument);
  CHECK_THROWS_AS(
      joint_probability_table(c, kPairSource, {"U1", "U2"}, {"L1", "L2"}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      joint_probability_table(c, kPairSource, {"U1", "U1"}, {"U2", "L2"}),
      std::invalid_argument);
}

TEST_CASE("joint tables are normalized on random pair circuits") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 40; ++i) {
    Circuit c = testing::random_pair_circuit(rng);
    REQUIRE(validate(c).empty());
    ProbabilityTable table = joint_probability_table(c, "PS", {"D1a", "D1b"}, {"D2a", "D2b"});
    CHECK(std::abs(table.joint_sum() - 1.0) <= 1e-12);
    for (const auto& [detector, marginal] : table.marginals) {
      CAPTURE(detector);
      CHECK(marginal >= -1e-12);
      CHECK(marginal <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("joint tables match the two-photon reference on random circuits") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 30; ++i) {
    Circuit c = testing::random_pair_circuit(rng);
    ProbabilityTable table = joint_probability_table(c, "PS", {"D1a", "D1b"}, {"D2a", "D2b"});
    for (int r = 0; r < 2; ++r) {
      for (int s = 0; s < 2; ++s) {
        JointOutcome outcome{table.arm1[r], table.arm2[s]};
        CHECK(std::abs(table.joint[r][s] - two_photon_oracle(c, "PS", outcome)) <= 1e-12);
      }
    }
  }
}
