#include "picsim/entanglement.hpp"

#include <algorithm>
#include <stdexcept>

#include "wiring.hpp"

namespace picsim {

namespace {

const PairSource& pair_source_of(const Circuit& circuit, std::string_view source_id) {
  const Source* source = circuit.find_source(source_id);
  if (source == nullptr) {
    throw std::invalid_argument("no source named '" + std::string(source_id) + "'");
  }
  const auto* pair = std::get_if<PairSource>(&source->kind);
  if (pair == nullptr) {
    throw std::invalid_argument("source '" + std::string(source_id) + "' is not a pair source");
  }
  return *pair;
}

bool contains(const std::vector<std::string>& ids, std::string_view id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

void require_detector(const Circuit& circuit, const std::string& id) {
  if (circuit.find_detector(id) == nullptr) {
    throw std::invalid_argument("no detector named '" + id + "'");
  }
}

}  // namespace

Probability ProbabilityTable::joint_probability(const JointOutcome& outcome) const {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (arm1[i] == outcome.detector_1 && arm2[j] == outcome.detector_2) {
        return joint[i][j];
      }
    }
  }
  throw std::invalid_argument("outcome (" + outcome.detector_1 + ", " + outcome.detector_2 +
                              ") is not in the table");
}

Probability ProbabilityTable::joint_sum() const {
  return joint[0][0] + joint[0][1] + joint[1][0] + joint[1][1];
}

std::array<std::vector<std::string>, 2> detector_arms(const Circuit& circuit,
                                                      std::string_view pair_source_id) {
  const PairSource& pair = pair_source_of(circuit, pair_source_id);
  wiring::Wiring w = wiring::build_wiring(circuit);
  auto origins = wiring::pair_origins(pair);
  return {wiring::reachable_detectors(circuit, w, {origins[0][0], origins[0][1]}),
          wiring::reachable_detectors(circuit, w, {origins[1][0], origins[1][1]})};
}

Amplitude joint_amplitude(const Circuit& circuit, std::string_view pair_source_id,
                          const JointOutcome& outcome, PartnerOrder order) {
  const PairSource& pair = pair_source_of(circuit, pair_source_id);
  require_detector(circuit, outcome.detector_1);
  require_detector(circuit, outcome.detector_2);

  auto arms = detector_arms(circuit, pair_source_id);
  if (contains(arms[1], outcome.detector_1) || contains(arms[0], outcome.detector_2)) {
    throw std::invalid_argument("outcome (" + outcome.detector_1 + ", " + outcome.detector_2 +
                                ") does not respect the two photon arms");
  }

  std::complex<double> sum{0.0, 0.0};
  for (BranchLabel branch : {BranchLabel::Top, BranchLabel::Bottom}) {
    PathOrigin origin_1 = pair_branch_origin(circuit, pair_source_id, branch, Arm::Arm1);
    PathOrigin origin_2 = pair_branch_origin(circuit, pair_source_id, branch, Arm::Arm2);
    std::complex<double> partner_1 = summed_kernel(circuit, origin_1, outcome.detector_1);
    std::complex<double> partner_2 = summed_kernel(circuit, origin_2, outcome.detector_2);
    sum += order == PartnerOrder::Arm1First ? partner_1 * partner_2 : partner_2 * partner_1;
  }
  return {pair.branch_amplitude * sum};
}

ProbabilityTable joint_probability_table(const Circuit& circuit, std::string_view pair_source_id,
                                         const std::array<std::string, 2>& arm1,
                                         const std::array<std::string, 2>& arm2) {
  for (const auto& id : arm1) {
    require_detector(circuit, id);
  }
  for (const auto& id : arm2) {
    require_detector(circuit, id);
  }
  std::array<std::string, 4> all{arm1[0], arm1[1], arm2[0], arm2[1]};
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw std::invalid_argument("arm detectors must be four distinct detectors");
  }
  auto arms = detector_arms(circuit, pair_source_id);
  for (const auto& id : arm1) {
    if (!contains(arms[0], id) || contains(arms[1], id)) {
      throw std::invalid_argument("detector '" + id + "' is not exclusive to photon arm 1");
    }
  }
  for (const auto& id : arm2) {
    if (!contains(arms[1], id) || contains(arms[0], id)) {
      throw std::invalid_argument("detector '" + id + "' is not exclusive to photon arm 2");
    }
  }

  ProbabilityTable table;
  table.arm1 = arm1;
  table.arm2 = arm2;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Amplitude a = joint_amplitude(circuit, pair_source_id, {arm1[i], arm2[j]});
      table.joint[i][j] = detection_probability(a);
    }
  }
  table.marginals[arm1[0]] = table.joint[0][0] + table.joint[0][1];
  table.marginals[arm1[1]] = table.joint[1][0] + table.joint[1][1];
  table.marginals[arm2[0]] = table.joint[0][0] + table.joint[1][0];
  table.marginals[arm2[1]] = table.joint[0][1] + table.joint[1][1];
  return table;
}

Probability marginal_probability(const ProbabilityTable& table, std::string_view detector_id) {
  auto it = table.marginals.find(std::string(detector_id));
  if (it == table.marginals.end()) {
    throw std::invalid_argument("detector '" + std::string(detector_id) +
                                "' is not in the table");
  }
  return it->second;
}

}  // namespace picsim
