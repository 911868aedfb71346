#ifndef PICSIM_PATH_ENGINE_HPP
#define PICSIM_PATH_ENGINE_HPP

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "picsim/circuit.hpp"

namespace picsim {

/// Emission branch of a pair source.
enum class BranchLabel { Top, Bottom };

/// Which photon of a pair: Arm1 rides index 0 of each branch pair, Arm2
/// rides index 1.
enum class Arm { Arm1 = 0, Arm2 = 1 };

std::string_view branch_label_name(BranchLabel branch);

/// Starting point of a traversal: a source output mode, tagged with the
/// emission branch when it belongs to a pair source.
struct PathOrigin {
  ModeId mode;
  std::optional<BranchLabel> branch;
};

/// One step of a path: through an element, along a declared segment, or
/// through a pair source's pass-through port.
struct Hop {
  enum class Kind { Element, Segment, Passthrough };
  Kind kind;
  int index;  // element / segment / source index in the circuit
  ModeId in;
  ModeId out;
};

/// An ordered traversal from a source output port to a detector.
struct Path {
  std::optional<BranchLabel> branch;
  std::vector<Hop> hops;
  std::string terminal;  // detector id
};

/// Complex amplitude of a path, composed multiplicatively hop by hop.
struct Kernel {
  std::complex<double> amplitude{1.0, 0.0};
};

/// Kernels of consecutive legs multiply: magnitudes multiply, phases add.
Kernel compose(const Kernel& k1, const Kernel& k2);

PathOrigin single_photon_origin(const Circuit& circuit, std::string_view source_id);
PathOrigin pair_branch_origin(const Circuit& circuit, std::string_view source_id,
                              BranchLabel branch, Arm arm);

/// Every acyclic mode-following route from `origin` to the named detector,
/// in a deterministic order (depth-first, transmit port before reflect
/// port at each beam splitter). Throws std::invalid_argument for unknown
/// detectors.
std::vector<Path> enumerate_paths(const Circuit& circuit, const PathOrigin& origin,
                                  std::string_view detector_id);

/// Union of enumerate_paths over both branches of a pair source, for one
/// photon arm. Each returned path carries its branch label.
std::vector<Path> enumerate_pair_paths(const Circuit& circuit, std::string_view source_id,
                                       Arm arm, std::string_view detector_id);

/// Product of the element transfer coefficients and segment phase factors
/// along the path. Throws std::invalid_argument when the hop list is not
/// connected.
Kernel path_kernel(const Circuit& circuit, const Path& path);

/// Sum of path_kernel over enumerate_paths(origin, detector).
std::complex<double> summed_kernel(const Circuit& circuit, const PathOrigin& origin,
                                   std::string_view detector_id);

}  // namespace picsim

#endif
