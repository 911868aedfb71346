#include "wiring.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>

namespace picsim::wiring {

namespace {

std::complex<double> polar1(double phase) { return std::polar(1.0, phase); }

Node make_element_node(const Circuit& circuit, int element_index) {
  const Element& element = circuit.elements[element_index];
  Node node{NodeKind::Element, element_index, {}, {}, {}};
  if (const auto* bs = std::get_if<BeamSplitter>(&element.kind)) {
    for (int i = 0; i < 2; ++i) {
      if (!bs->in[i]) {
        continue;
      }
      node.ins.push_back(*bs->in[i]);
      node.transfers.push_back({*bs->in[i], bs->out[i], {bs->amplitude_split, 0.0}});
      node.transfers.push_back(
          {*bs->in[i], bs->out[1 - i], bs->amplitude_split * polar1(bs->reflection_phase)});
    }
    node.outs = {bs->out[0], bs->out[1]};
  } else if (const auto* mirror = std::get_if<Mirror>(&element.kind)) {
    node.ins = {mirror->in};
    node.outs = {mirror->out};
    node.transfers.push_back({mirror->in, mirror->out, polar1(mirror->reflection_phase)});
  } else {
    const auto& shifter = std::get<PhaseShifter>(element.kind);
    node.ins = {shifter.in};
    node.outs = {shifter.out};
    node.transfers.push_back({shifter.in, shifter.out, polar1(shifter.value)});
  }
  return node;
}

}  // namespace

const Node* Wiring::consumer_node(const ModeId& mode) const {
  auto it = consumer.find(mode);
  if (it == consumer.end() || it->second.kind != Consumer::Kind::Node) {
    return nullptr;
  }
  return &nodes[it->second.index];
}

const Detector* Wiring::consumer_detector(const Circuit& circuit, const ModeId& mode) const {
  auto it = consumer.find(mode);
  if (it == consumer.end() || it->second.kind != Consumer::Kind::Detector) {
    return nullptr;
  }
  return &circuit.detectors[it->second.index];
}

Wiring build_wiring(const Circuit& circuit) {
  Wiring w;
  for (int i = 0; i < static_cast<int>(circuit.elements.size()); ++i) {
    w.nodes.push_back(make_element_node(circuit, i));
  }
  for (int i = 0; i < static_cast<int>(circuit.sources.size()); ++i) {
    const auto* pair = std::get_if<PairSource>(&circuit.sources[i].kind);
    if (pair && pair->align_in) {
      Node node{NodeKind::Conduit, i, {}, {}, {}};
      node.ins = {*pair->align_in};
      node.outs = {pair->bottom[1]};
      node.transfers.push_back({*pair->align_in, pair->bottom[1], {1.0, 0.0}});
      w.nodes.push_back(node);
    }
  }

  auto add_producer = [&](const ModeId& mode, Producer producer, const std::string& owner) {
    auto [it, inserted] = w.producer.emplace(mode, producer);
    if (!inserted) {
      w.duplicate_producers[mode].push_back(owner);
    }
  };
  auto add_consumer = [&](const ModeId& mode, Consumer consumer, const std::string& owner) {
    auto [it, inserted] = w.consumer.emplace(mode, consumer);
    if (!inserted) {
      w.duplicate_consumers[mode].push_back(owner);
    }
  };

  for (int i = 0; i < static_cast<int>(circuit.sources.size()); ++i) {
    const Source& source = circuit.sources[i];
    if (const auto* single = std::get_if<SinglePhoton>(&source.kind)) {
      add_producer(single->out, {Producer::Kind::SourceEmission, i}, source.id);
    } else {
      const auto& pair = std::get<PairSource>(source.kind);
      for (const ModeId& m : {pair.top[0], pair.top[1], pair.bottom[0], pair.bottom[1]}) {
        add_producer(m, {Producer::Kind::SourceEmission, i}, source.id);
      }
      // The conduit exit shares the bottom[1] emission port, so it is not a
      // second producer; only its input counts as consumption.
    }
  }
  for (int n = 0; n < static_cast<int>(w.nodes.size()); ++n) {
    const Node& node = w.nodes[n];
    const std::string owner = node.kind == NodeKind::Element
                                  ? circuit.elements[node.index].id
                                  : circuit.sources[node.index].id;
    for (const ModeId& m : node.ins) {
      add_consumer(m, {Consumer::Kind::Node, n}, owner);
    }
    if (node.kind == NodeKind::Element) {
      for (const ModeId& m : node.outs) {
        add_producer(m, {Producer::Kind::Node, n}, owner);
      }
    }
  }
  for (int i = 0; i < static_cast<int>(circuit.detectors.size()); ++i) {
    add_consumer(circuit.detectors[i].mode, {Consumer::Kind::Detector, i},
                 circuit.detectors[i].id);
  }
  return w;
}

std::optional<std::vector<int>> topological_order(const Wiring& wiring,
                                                  std::optional<std::uint64_t> shuffle_seed) {
  const int n = static_cast<int>(wiring.nodes.size());
  std::vector<std::vector<int>> successors(n);
  std::vector<int> in_degree(n, 0);
  for (int a = 0; a < n; ++a) {
    for (const ModeId& out : wiring.nodes[a].outs) {
      auto it = wiring.consumer.find(out);
      if (it != wiring.consumer.end() && it->second.kind == Consumer::Kind::Node) {
        successors[a].push_back(it->second.index);
        ++in_degree[it->second.index];
      }
    }
  }

  std::vector<int> ready;
  for (int i = 0; i < n; ++i) {
    if (in_degree[i] == 0) {
      ready.push_back(i);
    }
  }
  std::optional<std::mt19937_64> rng;
  if (shuffle_seed) {
    rng.emplace(*shuffle_seed);
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::size_t pick = 0;
    if (rng) {
      pick = std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(*rng);
    }
    int node = ready[pick];
    ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(pick));
    order.push_back(node);
    for (int succ : successors[node]) {
      if (--in_degree[succ] == 0) {
        ready.push_back(succ);
      }
    }
    if (!rng) {
      std::sort(ready.begin(), ready.end());
    }
  }
  if (static_cast<int>(order.size()) != n) {
    return std::nullopt;
  }
  return order;
}

std::array<std::array<ModeId, 2>, 2> pair_origins(const PairSource& pair) {
  return {{{pair.top[0], pair.bottom[0]}, {pair.top[1], pair.bottom[1]}}};
}

std::vector<std::string> reachable_detectors(const Circuit& circuit, const Wiring& wiring,
                                             const std::vector<ModeId>& start) {
  std::set<ModeId> seen;
  std::deque<ModeId> frontier(start.begin(), start.end());
  std::set<std::string> hits;
  while (!frontier.empty()) {
    ModeId mode = frontier.front();
    frontier.pop_front();
    if (!seen.insert(mode).second) {
      continue;
    }
    auto it = wiring.consumer.find(mode);
    if (it == wiring.consumer.end()) {
      continue;
    }
    if (it->second.kind == Consumer::Kind::Detector) {
      hits.insert(circuit.detectors[it->second.index].id);
      continue;
    }
    const Node& node = wiring.nodes[it->second.index];
    for (const Transfer& t : node.transfers) {
      if (t.in == mode) {
        frontier.push_back(t.out);
      }
    }
  }
  return {hits.begin(), hits.end()};
}

}  // namespace picsim::wiring
