#ifndef PICSIM_MONTECARLO_HPP
#define PICSIM_MONTECARLO_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "picsim/entanglement.hpp"

namespace picsim {

/// One photon's sampled detection in one trial. Every trial yields exactly
/// one record per arm, matched by trial_id.
struct EventRecord {
  std::int64_t trial_id;
  Arm arm;
  std::string detector;

  bool operator==(const EventRecord&) const = default;
};

template <typename Key>
struct CountTable {
  std::map<Key, std::int64_t> counts;
  std::int64_t total = 0;

  std::int64_t count(const Key& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0 : it->second;
  }
};

using JointCounts = CountTable<JointOutcome>;
using SinglesCounts = CountTable<std::string>;

/// Draws `n` joint outcomes from the table's joint distribution and
/// returns the 2n per-arm records. Deterministic for a given
/// (table, n, seed); outcomes with probability zero are never drawn.
std::vector<EventRecord> sample_events(const ProbabilityTable& table, std::int64_t n,
                                       std::uint64_t seed);

/// Joint outcome counts recovered by matching the two arms' records on
/// trial_id. Throws std::runtime_error naming the trial when a trial does
/// not have exactly one record per arm.
JointCounts coincidence_counts(std::span<const EventRecord> events);

/// Per-detector counts, ignoring partners.
SinglesCounts singles_counts(std::span<const EventRecord> events);

/// CSV export with header `trial_id,arm,detector` and LF line endings.
std::string events_csv(std::span<const EventRecord> events);

}  // namespace picsim

#endif
