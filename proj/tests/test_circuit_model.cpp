#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>
#include <random>

#include "picsim/circuit.hpp"
#include "picsim/scenarios.hpp"

using namespace picsim;

namespace {

bool has_violation(const std::vector<Violation>& violations, ViolationKind kind,
                   std::string_view subject = {}) {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
    return v.kind == kind && (subject.empty() || v.subject == subject);
  });
}

}  // namespace

TEST_CASE("reduce_phase maps into [0, 2pi)") {
  CHECK(reduce_phase(0.0) == 0.0);
  CHECK(reduce_phase(kTau) == 0.0);
  CHECK(reduce_phase(-kHalfPi) == doctest::Approx(3.0 * kHalfPi).epsilon(1e-15));
  CHECK(reduce_phase(5.0 * kTau + 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(reduce_phase(-1e-300) < kTau);
  CHECK(reduce_phase(-1e-300) >= 0.0);
}

TEST_CASE("phase_distance is circular") {
  CHECK(phase_distance(0.1, kTau - 0.1) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(phase_distance(1.0, 1.0) == 0.0);
  CHECK(phase_distance(0.0, std::numbers::pi) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("propagation_phase basic values") {
  CHECK(propagation_phase(810.0, 810.0) == 0.0);          // one full cycle
  CHECK(propagation_phase(405.0, 810.0) == std::numbers::pi);
  CHECK(propagation_phase(0.0, 810.0) == 0.0);
  CHECK_THROWS_AS(propagation_phase(100.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(propagation_phase(100.0, -810.0), std::invalid_argument);
  CHECK_THROWS_AS(propagation_phase(-1.0, 810.0), std::invalid_argument);
}

TEST_CASE("propagation_phase is periodic in one wavelength") {
  std::mt19937_64 rng(7);
  // Whole-nanometre inputs keep l + w exactly representable, so the check
  // probes the function rather than the rounding of its arguments.
  std::uniform_int_distribution<long> length(0, 1000000);
  std::uniform_int_distribution<long> wavelength(100, 2000);
  for (int i = 0; i < 500; ++i) {
    double l = static_cast<double>(length(rng));
    double w = static_cast<double>(wavelength(rng));
    CHECK(phase_distance(propagation_phase(l + w, w), propagation_phase(l, w)) <= 1e-12);
  }
  std::uniform_real_distribution<double> real_length(0.0, 1.0e4);
  std::uniform_real_distribution<double> real_wavelength(100.0, 2000.0);
  for (int i = 0; i < 200; ++i) {
    double l = real_length(rng);
    double w = real_wavelength(rng);
    CHECK(phase_distance(propagation_phase(l + w, w), propagation_phase(l, w)) <= 1e-12);
  }
}

TEST_CASE("element_transfer of the default beam splitter") {
  Element bs{"BS", BeamSplitter{{ModeId("a"), ModeId("b")}, {"c", "d"}}};
  std::complex<double> transmit = element_transfer(bs, "a", "c");
  std::complex<double> reflect = element_transfer(bs, "a", "d");
  CHECK(std::abs(transmit - std::complex<double>(kInvSqrt2, 0.0)) <= 1e-12);
  CHECK(std::abs(reflect - std::complex<double>(0.0, kInvSqrt2)) <= 1e-12);
  CHECK(std::abs(element_transfer(bs, "b", "d") - transmit) <= 1e-12);
  CHECK(std::abs(element_transfer(bs, "b", "c") - reflect) <= 1e-12);
  CHECK_THROWS_AS(element_transfer(bs, "a", "a"), std::invalid_argument);
  CHECK_THROWS_AS(element_transfer(bs, "c", "a"), std::invalid_argument);
}

TEST_CASE("element_transfer of mirrors and shifters") {
  Element mirror{"M", Mirror{"a", "b"}};
  CHECK(std::abs(element_transfer(mirror, "a", "b") - std::complex<double>(0.0, 1.0)) <= 1e-12);
  Element tilted{"M2", Mirror{"a", "b", 0.3}};
  CHECK(std::abs(element_transfer(tilted, "a", "b") - std::polar(1.0, 0.3)) <= 1e-12);
  Element shifter{"F", PhaseShifter{"a", "b", kHalfPi}};
  CHECK(std::abs(element_transfer(shifter, "a", "b") - std::complex<double>(0.0, 1.0)) <= 1e-12);
  CHECK_THROWS_AS(element_transfer(shifter, "b", "a"), std::invalid_argument);
}

TEST_CASE("default beam splitter port array is unitary") {
  Element e{"BS", BeamSplitter{{ModeId("a"), ModeId("b")}, {"c", "d"}}};
  std::complex<double> u[2][2] = {
      {element_transfer(e, "a", "c"), element_transfer(e, "b", "c")},
      {element_transfer(e, "a", "d"), element_transfer(e, "b", "d")},
  };
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      std::complex<double> dot =
          std::conj(u[0][i]) * u[0][j] + std::conj(u[1][i]) * u[1][j];
      double expected = i == j ? 1.0 : 0.0;
      CHECK(std::abs(dot - expected) <= 1e-12);
    }
  }
}

TEST_CASE("validate accepts the canonical setups") {
  CHECK(validate(build_mzi(0.3)).empty());
  CHECK(validate(build_jaeger(0.1, 0.2)).empty());
  CHECK(validate(build_lemos(0.5)).empty());
  CHECK(validate(build_lemos(0.5, true)).empty());
  CHECK(validate(Circuit{}).empty());
}

TEST_CASE("validate flags a mode consumed twice") {
  Circuit c = build_mzi(0.0);
  c.elements.push_back({"EXTRA", Mirror{"t1", "q"}});  // t1 already feeds MA
  c.detectors.push_back({"DQ", "q"});
  auto violations = validate(c);
  CHECK(has_violation(violations, ViolationKind::DuplicateConsumer, "t1"));
}

TEST_CASE("validate flags a detector mode with no producer") {
  Circuit c = build_mzi(0.0);
  c.detectors.push_back({"DX", "nowhere"});
  auto violations = validate(c);
  CHECK(has_violation(violations, ViolationKind::DanglingMode, "nowhere"));
}

TEST_CASE("validate flags an unconsumed source output") {
  Circuit c = build_mzi(0.0);
  c.sources.push_back({"S2", SinglePhoton{"loose"}});
  CHECK(has_violation(validate(c), ViolationKind::UnconsumedMode, "loose"));
}

TEST_CASE("validate flags a cycle") {
  Circuit c;
  c.elements.push_back({"M1", Mirror{"a", "b"}});
  c.elements.push_back({"M2", Mirror{"b", "a"}});
  CHECK(has_violation(validate(c), ViolationKind::CycleDetected));
}

TEST_CASE("validate flags a detector fed only by a cycle") {
  Circuit c;
  c.elements.push_back({"B", BeamSplitter{{ModeId("a"), std::nullopt}, {"b", "c"}}});
  c.elements.push_back({"M", Mirror{"b", "a"}});
  c.detectors.push_back({"D", "c"});
  auto violations = validate(c);
  CHECK(has_violation(violations, ViolationKind::CycleDetected));
  CHECK(has_violation(violations, ViolationKind::UnreachableDetector, "D"));
}

TEST_CASE("validate flags duplicate ids") {
  Circuit c = build_mzi(0.0);
  c.elements.push_back({"MA", Mirror{"z1", "z2"}});
  CHECK(has_violation(validate(c), ViolationKind::DuplicateId, "MA"));

  Circuit d = build_mzi(0.0);
  d.segments.push_back({"t1", 0.1});
  d.segments.push_back({"t1", 0.2});
  CHECK(has_violation(validate(d), ViolationKind::DuplicateId, "t1"));
}

TEST_CASE("validate flags a beam splitter with no input") {
  Circuit c;
  c.elements.push_back({"B", BeamSplitter{{std::nullopt, std::nullopt}, {"a", "b"}}});
  c.detectors.push_back({"DA", "a"});
  c.detectors.push_back({"DB", "b"});
  CHECK(has_violation(validate(c), ViolationKind::MissingInput, "B"));
}

TEST_CASE("validate flags bad magnitudes and phases") {
  Circuit c = build_mzi(0.0);
  std::get<BeamSplitter>(c.elements[0].kind).amplitude_split = 0.9;
  CHECK(has_violation(validate(c), ViolationKind::BadSplitRatio, "BS1"));

  Circuit d = build_jaeger(0.0, 0.0);
  std::get<PairSource>(d.sources[0].kind).branch_amplitude = 0.5;
  CHECK(has_violation(validate(d), ViolationKind::BadBranchAmplitude, "PS"));

  Circuit e = build_mzi(0.0);
  std::get<PhaseShifter>(e.elements[2].kind).value =
      std::numeric_limits<double>::quiet_NaN();
  CHECK(has_violation(validate(e), ViolationKind::NonFinitePhase, "PHI"));

  Circuit f = build_jaeger(0.0, 0.0);
  std::get<PairSource>(f.sources[0].kind).top[1] = "b1";
  CHECK(has_violation(validate(f), ViolationKind::PairModeOverlap, "PS"));
}

TEST_CASE("with_phase_value replaces only the named shifter") {
  Circuit c = build_mzi(0.0);
  Circuit shifted = with_phase_value(c, kMziShifter, kHalfPi);
  CHECK(std::get<PhaseShifter>(shifted.find_element(kMziShifter)->kind).value ==
        doctest::Approx(kHalfPi));
  CHECK(std::get<PhaseShifter>(c.find_element(kMziShifter)->kind).value == 0.0);
  CHECK(std::get<PhaseShifter>(with_phase_value(c, kMziShifter, -kHalfPi)
                                   .find_element(kMziShifter)
                                   ->kind)
            .value == doctest::Approx(3.0 * kHalfPi));
  CHECK_THROWS_AS(with_phase_value(c, "MA", 1.0), std::invalid_argument);
  CHECK_THROWS_AS(with_phase_value(c, "missing", 1.0), std::invalid_argument);
}

TEST_CASE("segment_phase sums declared segments and defaults to zero") {
  Circuit c = build_mzi(0.0);
  CHECK(c.segment_phase("t1") == 0.0);
  c.segments.push_back({"t1", 1.0});
  CHECK(c.segment_phase("t1") == doctest::Approx(1.0));
}
