#include "picsim/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <stdexcept>

namespace picsim {

std::vector<EventRecord> sample_events(const ProbabilityTable& table, std::int64_t n,
                                       std::uint64_t seed) {
  struct Cell {
    double cumulative;
    double probability;
    int i, j;
  };
  std::array<Cell, 4> cells;
  double running = 0.0;
  int k = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      running += table.joint[i][j];
      cells[k++] = {running, table.joint[i][j], i, j};
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<EventRecord> events;
  events.reserve(static_cast<std::size_t>(2 * std::max<std::int64_t>(n, 0)));
  for (std::int64_t trial = 0; trial < n; ++trial) {
    // 53-bit uniform draw in [0, 1).
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    u *= running;
    const Cell* picked = nullptr;
    for (const Cell& cell : cells) {
      if (u < cell.cumulative && cell.probability > 0.0) {
        picked = &cell;
        break;
      }
    }
    if (picked == nullptr) {
      for (const Cell& cell : cells) {
        if (cell.probability > 0.0) {
          picked = &cell;
        }
      }
    }
    if (picked == nullptr) {
      throw std::invalid_argument("sample_events: table has no positive joint probability");
    }
    events.push_back({trial, Arm::Arm1, table.arm1[picked->i]});
    events.push_back({trial, Arm::Arm2, table.arm2[picked->j]});
  }
  return events;
}

namespace {

// Detector ids per run are few; interning them keeps the per-trial state
// a pair of small integers.
class DetectorInterner {
 public:
  int intern(const std::string& name) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) {
        return static_cast<int>(i);
      }
    }
    names_.push_back(name);
    return static_cast<int>(names_.size()) - 1;
  }
  const std::string& name(int index) const { return names_[index]; }

 private:
  std::vector<std::string> names_;
};

[[noreturn]] void throw_duplicate_arm(std::int64_t trial_id) {
  throw std::runtime_error("coincidence_counts: trial " + std::to_string(trial_id) +
                           " has more than one record for one arm");
}

[[noreturn]] void throw_unpaired(std::int64_t trial_id) {
  throw std::runtime_error("coincidence_counts: trial " + std::to_string(trial_id) +
                           " is unpaired");
}

}  // namespace

JointCounts coincidence_counts(std::span<const EventRecord> events) {
  JointCounts counts;
  if (events.empty()) {
    return counts;
  }

  std::int64_t min_id = events.front().trial_id;
  std::int64_t max_id = min_id;
  for (const EventRecord& event : events) {
    min_id = std::min(min_id, event.trial_id);
    max_id = std::max(max_id, event.trial_id);
  }

  DetectorInterner interner;
  std::map<std::pair<int, int>, std::int64_t> pair_counts;
  auto tally = [&](std::int64_t trial_id, int arm1_detector, int arm2_detector) {
    if (arm1_detector < 0 || arm2_detector < 0) {
      throw_unpaired(trial_id);
    }
    ++pair_counts[{arm1_detector, arm2_detector}];
    ++counts.total;
  };

  const std::uint64_t range =
      static_cast<std::uint64_t>(max_id) - static_cast<std::uint64_t>(min_id) + 1;
  if (range <= 2 * events.size()) {
    // Trial ids are dense: per-trial slots live in a flat array.
    std::vector<std::array<int, 2>> slots(range, {-2, -2});  // -2 absent, -1 reserved
    for (const EventRecord& event : events) {
      auto& slot = slots[static_cast<std::size_t>(event.trial_id - min_id)]
                        [event.arm == Arm::Arm1 ? 0 : 1];
      if (slot != -2) {
        throw_duplicate_arm(event.trial_id);
      }
      slot = interner.intern(event.detector);
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i][0] == -2 && slots[i][1] == -2) {
        continue;  // no such trial
      }
      tally(min_id + static_cast<std::int64_t>(i), slots[i][0] == -2 ? -1 : slots[i][0],
            slots[i][1] == -2 ? -1 : slots[i][1]);
    }
  } else {
    std::map<std::int64_t, std::array<int, 2>> trials;
    for (const EventRecord& event : events) {
      auto [it, inserted] = trials.emplace(event.trial_id, std::array<int, 2>{-1, -1});
      int& slot = it->second[event.arm == Arm::Arm1 ? 0 : 1];
      if (!inserted && slot != -1) {
        throw_duplicate_arm(event.trial_id);
      }
      slot = interner.intern(event.detector);
    }
    for (const auto& [trial_id, slot] : trials) {
      tally(trial_id, slot[0], slot[1]);
    }
  }

  for (const auto& [key, value] : pair_counts) {
    counts.counts[{interner.name(key.first), interner.name(key.second)}] = value;
  }
  return counts;
}

SinglesCounts singles_counts(std::span<const EventRecord> events) {
  DetectorInterner interner;
  std::vector<std::int64_t> tally;
  for (const EventRecord& event : events) {
    int index = interner.intern(event.detector);
    if (static_cast<std::size_t>(index) >= tally.size()) {
      tally.resize(index + 1, 0);
    }
    ++tally[index];
  }
  SinglesCounts counts;
  for (std::size_t i = 0; i < tally.size(); ++i) {
    counts.counts[interner.name(static_cast<int>(i))] = tally[i];
    counts.total += tally[i];
  }
  return counts;
}

std::string events_csv(std::span<const EventRecord> events) {
  std::string out = "trial_id,arm,detector\n";
  for (const EventRecord& event : events) {
    out += std::to_string(event.trial_id);
    out += event.arm == Arm::Arm1 ? ",1," : ",2,";
    out += event.detector;
    out += '\n';
  }
  return out;
}

}  // namespace picsim
