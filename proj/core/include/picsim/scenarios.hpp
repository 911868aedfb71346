#ifndef PICSIM_SCENARIOS_HPP
#define PICSIM_SCENARIOS_HPP

// Builders for the three canonical setups, with port geometry fixed so the
// analytic fringe and joint-table laws come out with their standard signs:
//
//   mzi     one photon split over two arms and recombined; the "bright"
//           detector sees P = (1 + cos(phi))/2.
//   jaeger  a pair source feeding one two-port analyzer per photon; joint
//           probabilities depend on phi1 + phi2 only.
//   lemos   two pair-emission branches whose second outputs are aligned
//           into a single undetected beam; an object phase on that beam
//           steers the signal detectors g and h.

#include <cstddef>
#include <string_view>
#include <vector>

#include "picsim/circuit.hpp"
#include "picsim/entanglement.hpp"

namespace picsim {

inline constexpr std::string_view kMziSource = "SRC";
inline constexpr std::string_view kMziShifter = "PHI";
inline constexpr std::string_view kMziBright = "bright";
inline constexpr std::string_view kMziDark = "dark";

inline constexpr std::string_view kPairSource = "PS";
inline constexpr std::string_view kJaegerShifter1 = "PHI1";
inline constexpr std::string_view kJaegerShifter2 = "PHI2";
inline constexpr std::string_view kJaegerU1 = "U1";
inline constexpr std::string_view kJaegerL1 = "L1";
inline constexpr std::string_view kJaegerU2 = "U2";
inline constexpr std::string_view kJaegerL2 = "L2";

inline constexpr std::string_view kLemosObject = "OBJ";
inline constexpr std::string_view kLemosG = "g";
inline constexpr std::string_view kLemosH = "h";
inline constexpr std::string_view kLemosIdler = "idler";
inline constexpr std::string_view kLemosDump = "dump";

/// Balanced two-arm interferometer with a phase shifter in the upper arm.
Circuit build_mzi(double phase_value);

/// Pair source with one analyzer beam splitter per arm; PHI1 sits on the
/// top branch leg of arm 1, PHI2 on the top branch leg of arm 2. U ports
/// are the transmit partners of the top-branch inputs.
Circuit build_jaeger(double phi1, double phi2);

/// Two-branch pair emission with aligned second outputs ("idlers") and the
/// signals recombined on a beam splitter. The object phase sits on the
/// top branch's idler leg; a fixed quarter-turn segment calibrates
/// object_phase = 0 to be fully constructive at detector g.
///
/// With `distinguishable` set, the top idler ends on its own dump detector
/// instead of joining the bottom idler beam, which erases the signal
/// fringes.
Circuit build_lemos(double object_phase, bool distinguishable = false);

/// The canonical Jaeger joint table over arms {U1, L1} x {U2, L2}.
ProbabilityTable jaeger_table(const Circuit& circuit);

struct LemosSignal {
  Probability g = 0.0;
  Probability h = 0.0;
};

/// Signal-detector probabilities, summed over the undetected partner's
/// outcomes (second-order computation; no first-order shortcut).
LemosSignal lemos_signal_probabilities(const Circuit& circuit);

/// Grid of object phases, row-major.
struct PhaseImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> phases;

  double at(std::size_t x, std::size_t y) const { return phases[y * width + x]; }
  double& at(std::size_t x, std::size_t y) { return phases[y * width + x]; }
};

/// Per-pixel g/h intensities; g + h = 1 for every pixel.
struct IntensityImagePair {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> g;
  std::vector<double> h;

  double g_at(std::size_t x, std::size_t y) const { return g[y * width + x]; }
  double h_at(std::size_t x, std::size_t y) const { return h[y * width + x]; }
};

/// Evaluates build_lemos independently for every pixel phase.
IntensityImagePair lemos_image(const PhaseImage& image, bool distinguishable = false);

/// Plain CSV grid of radians, one row per line. Throws std::runtime_error
/// on malformed input.
PhaseImage parse_phase_image_csv(std::string_view text);

/// CSV rendering of one intensity grid with 12 significant digits.
std::string intensity_grid_csv(std::size_t width, std::size_t height,
                               const std::vector<double>& values);

}  // namespace picsim

#endif
