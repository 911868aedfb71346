#include "picsim/interference.hpp"

#include <stdexcept>

namespace picsim {

namespace {

const Source& only_single_photon_source(const Circuit& circuit) {
  const Source* found = nullptr;
  for (const Source& s : circuit.sources) {
    if (std::holds_alternative<SinglePhoton>(s.kind)) {
      if (found != nullptr) {
        throw std::invalid_argument("circuit has more than one single-photon source");
      }
      found = &s;
    }
  }
  if (found == nullptr) {
    throw std::invalid_argument("circuit has no single-photon source");
  }
  return *found;
}

}  // namespace

Amplitude first_order_amplitude(const Circuit& circuit, std::string_view source_id,
                                std::string_view detector_id) {
  PathOrigin origin = single_photon_origin(circuit, source_id);
  return {summed_kernel(circuit, origin, detector_id)};
}

Probability detection_probability(const Amplitude& amplitude) {
  return std::norm(amplitude.value);
}

std::vector<std::pair<double, Probability>> fringe_sweep(const Circuit& circuit,
                                                         std::string_view shifter_id,
                                                         std::span<const double> values,
                                                         std::string_view detector_id) {
  const Element* shifter = circuit.find_element(shifter_id);
  if (shifter == nullptr || !std::holds_alternative<PhaseShifter>(shifter->kind)) {
    throw std::invalid_argument("no phase shifter named '" + std::string(shifter_id) + "'");
  }
  const Source& source = only_single_photon_source(circuit);
  std::vector<std::pair<double, Probability>> result;
  result.reserve(values.size());
  for (double value : values) {
    Circuit sample = with_phase_value(circuit, shifter_id, value);
    Amplitude a = first_order_amplitude(sample, source.id, detector_id);
    result.emplace_back(value, detection_probability(a));
  }
  return result;
}

}  // namespace picsim
