#ifndef PICSIM_INTERFERENCE_HPP
#define PICSIM_INTERFERENCE_HPP

#include <complex>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "picsim/circuit.hpp"
#include "picsim/path_engine.hpp"

namespace picsim {

/// Detection amplitude at a detector: the sum of all contributing path
/// kernels.
struct Amplitude {
  std::complex<double> value{0.0, 0.0};
};

using Probability = double;

/// First-order amplitude from a single-photon source to a detector.
/// Throws std::invalid_argument when the source is a pair source.
Amplitude first_order_amplitude(const Circuit& circuit, std::string_view source_id,
                                std::string_view detector_id);

Probability detection_probability(const Amplitude& amplitude);

/// Detection probability at one detector for each phase-shifter value in
/// `values`, overriding the named shifter per sample. The circuit must
/// contain exactly one single-photon source.
std::vector<std::pair<double, Probability>> fringe_sweep(const Circuit& circuit,
                                                         std::string_view shifter_id,
                                                         std::span<const double> values,
                                                         std::string_view detector_id);

}  // namespace picsim

#endif
