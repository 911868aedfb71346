#ifndef PICSIM_CIRCUIT_HPP
#define PICSIM_CIRCUIT_HPP

#include <array>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace picsim {

/// Modes are the directed wires of a circuit. Each mode is produced by
/// exactly one source/element output port and consumed by exactly one
/// element/detector input port.
using ModeId = std::string;

inline constexpr double kTau = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

/// Reduces an angle into [0, 2*pi).
double reduce_phase(double radians);

/// Circular distance between two angles, in [0, pi].
double phase_distance(double a, double b);

/// Phase accumulated by free propagation over `length_nm` at wavelength
/// `wavelength_nm`, reduced into [0, 2*pi). Throws std::invalid_argument
/// for non-positive wavelengths or negative lengths.
double propagation_phase(double length_nm, double wavelength_nm);

/// Four-port splitter. out[0] is the transmit partner of in[0], out[1]
/// the transmit partner of in[1]; the cross pairs reflect. An input port
/// may be left open (no incoming mode), which models an unused vacuum
/// port; both outputs must be wired.
struct BeamSplitter {
  std::array<std::optional<ModeId>, 2> in;
  std::array<ModeId, 2> out;
  double reflection_phase = kHalfPi;
  double amplitude_split = kInvSqrt2;
};

struct Mirror {
  ModeId in;
  ModeId out;
  double reflection_phase = kHalfPi;
};

struct PhaseShifter {
  ModeId in;
  ModeId out;
  double value = 0.0;  // radians, stored reduced mod 2*pi
};

struct Element {
  std::string id;
  std::variant<BeamSplitter, Mirror, PhaseShifter> kind;
};

/// Optional per-mode propagation phase. Modes without a declared segment
/// propagate with phase 0.
struct Segment {
  ModeId mode;
  double propagation_phase = 0.0;
};

struct SinglePhoton {
  ModeId out;
};

/// Emits a photon pair in an equal superposition of two branches. Index 0
/// of each branch pair feeds arm 1, index 1 feeds arm 2.
///
/// `align_in`, when set, is a pass-through input: amplitude arriving on it
/// is forwarded unchanged onto bottom[1]. This wires one branch's second
/// output into the other branch's beam path, which is how downstream
/// indistinguishability of the two branches is expressed structurally.
struct PairSource {
  std::array<ModeId, 2> top;
  std::array<ModeId, 2> bottom;
  double branch_amplitude = kInvSqrt2;
  std::optional<ModeId> align_in;
};

struct Source {
  std::string id;
  std::variant<SinglePhoton, PairSource> kind;
};

struct Detector {
  std::string id;
  ModeId mode;
};

enum class ViolationKind {
  DuplicateId,
  DuplicateProducer,
  DuplicateConsumer,
  DanglingMode,     // consumed or terminated, but never produced
  UnconsumedMode,   // produced, but nothing consumes it
  CycleDetected,
  UnreachableDetector,
  MissingInput,     // beam splitter with both input ports open
  BadSplitRatio,
  BadBranchAmplitude,
  NonFinitePhase,
  PairModeOverlap,
};

std::string_view violation_kind_name(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string subject;  // offending mode or element/source/detector id
  std::string message;

  std::string str() const;
};

struct Circuit {
  std::vector<Element> elements;
  std::vector<Segment> segments;
  std::vector<Source> sources;
  std::vector<Detector> detectors;

  const Element* find_element(std::string_view id) const;
  const Source* find_source(std::string_view id) const;
  const Detector* find_detector(std::string_view id) const;

  /// Effective propagation phase of a mode (0 when no segment declared).
  double segment_phase(const ModeId& mode) const;

  /// Every distinct mode referenced anywhere, in first-appearance order.
  std::vector<ModeId> modes() const;
};

/// Checks every structural invariant and returns the violations found.
/// An empty result means the circuit is well formed.
std::vector<Violation> validate(const Circuit& circuit);

/// Complex transfer coefficient of one element port pair.
/// Throws std::invalid_argument when (in_port, out_port) is not a port
/// pair of the element.
std::complex<double> element_transfer(const Element& element, const ModeId& in_port,
                                      const ModeId& out_port);

/// Copy of `circuit` with the named phase shifter's value replaced
/// (reduced mod 2*pi). Throws std::invalid_argument for unknown ids.
Circuit with_phase_value(Circuit circuit, std::string_view shifter_id, double value);

}  // namespace picsim

#endif
