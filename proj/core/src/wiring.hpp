#ifndef PICSIM_WIRING_HPP
#define PICSIM_WIRING_HPP

// Shared connectivity lookup built once per circuit: who produces and who
// consumes each mode, plus a node view (elements + pair-source conduits)
// used for traversal and topological ordering. Internal to the library.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "picsim/circuit.hpp"

namespace picsim::wiring {

enum class NodeKind { Element, Conduit };

/// One traversal step a node offers: amplitude on `in` continues on `out`
/// with factor `coeff`.
struct Transfer {
  ModeId in;
  ModeId out;
  std::complex<double> coeff;
};

struct Node {
  NodeKind kind;
  int index;  // element index, or source index for conduits
  std::vector<Transfer> transfers;
  std::vector<ModeId> ins;
  std::vector<ModeId> outs;
};

struct Producer {
  enum class Kind { SourceEmission, Node } kind;
  int index;  // source index or node index
};

struct Consumer {
  enum class Kind { Node, Detector } kind;
  int index;  // node index or detector index
};

struct Wiring {
  std::vector<Node> nodes;
  std::map<ModeId, Producer> producer;
  std::map<ModeId, Consumer> consumer;
  std::map<ModeId, std::vector<std::string>> duplicate_producers;  // mode -> extra owner ids
  std::map<ModeId, std::vector<std::string>> duplicate_consumers;

  const Node* consumer_node(const ModeId& mode) const;
  const Detector* consumer_detector(const Circuit& circuit, const ModeId& mode) const;
};

Wiring build_wiring(const Circuit& circuit);

/// Kahn ordering over nodes. Returns std::nullopt when the node graph has
/// a cycle. `shuffle_seed` permutes the ready set, producing an arbitrary
/// but valid topological order; without it the order is deterministic.
std::optional<std::vector<int>> topological_order(const Wiring& wiring,
                                                  std::optional<std::uint64_t> shuffle_seed = {});

/// Modes owned by each photon of a pair source: origin modes of (branch,
/// arm) combinations. arm 0 = photon 1, arm 1 = photon 2.
std::array<std::array<ModeId, 2>, 2> pair_origins(const PairSource& pair);

/// Detector ids reachable by forward traversal from `start` modes.
std::vector<std::string> reachable_detectors(const Circuit& circuit, const Wiring& wiring,
                                             const std::vector<ModeId>& start);

}  // namespace picsim::wiring

#endif
