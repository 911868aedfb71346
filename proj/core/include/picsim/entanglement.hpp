#ifndef PICSIM_ENTANGLEMENT_HPP
#define PICSIM_ENTANGLEMENT_HPP

#include <array>
#include <compare>
#include <map>
#include <string>
#include <string_view>

#include "picsim/circuit.hpp"
#include "picsim/interference.hpp"
#include "picsim/path_engine.hpp"

namespace picsim {

/// One joint detection outcome of a photon pair: detector_1 fires in arm 1
/// and detector_2 in arm 2.
struct JointOutcome {
  std::string detector_1;
  std::string detector_2;

  auto operator<=>(const JointOutcome&) const = default;
};

/// The four joint probabilities of a two-detectors-per-arm measurement,
/// plus the four single-detector marginals.
struct ProbabilityTable {
  std::array<std::string, 2> arm1;  // detector ids of arm 1
  std::array<std::string, 2> arm2;
  std::array<std::array<Probability, 2>, 2> joint{};  // joint[i][j] = P(arm1[i], arm2[j])
  std::map<std::string, Probability> marginals;

  Probability joint_probability(const JointOutcome& outcome) const;
  Probability joint_sum() const;
};

/// Which partner's summed kernel is the left factor of the branch
/// products. The two choices give bit-identical amplitudes.
enum class PartnerOrder { Arm1First, Arm2First };

/// Second-order amplitude for a joint outcome: the branch superposition
/// factor times the sum over emission branches of the product of the two
/// partners' summed path kernels. Partner kernels multiply only within a
/// branch.
Amplitude joint_amplitude(const Circuit& circuit, std::string_view pair_source_id,
                          const JointOutcome& outcome,
                          PartnerOrder order = PartnerOrder::Arm1First);

/// Full 2x2 joint table with marginals. The four detectors must split into
/// the two photons' arms as given; otherwise std::invalid_argument.
ProbabilityTable joint_probability_table(const Circuit& circuit, std::string_view pair_source_id,
                                         const std::array<std::string, 2>& arm1,
                                         const std::array<std::string, 2>& arm2);

/// Sum of the two joint entries containing the detector. Throws
/// std::invalid_argument for detectors absent from the table.
Probability marginal_probability(const ProbabilityTable& table, std::string_view detector_id);

/// Detector ids reachable from each photon's origin modes, sorted by id.
/// [0] lists arm-1 detectors, [1] arm-2 detectors.
std::array<std::vector<std::string>, 2> detector_arms(const Circuit& circuit,
                                                      std::string_view pair_source_id);

}  // namespace picsim

#endif
