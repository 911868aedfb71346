#include "picsim/circuit.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "wiring.hpp"

namespace picsim {

double reduce_phase(double radians) {
  double r = std::fmod(radians, kTau);
  if (r < 0.0) {
    r += kTau;
  }
  if (r >= kTau) {
    r = 0.0;
  }
  return r;
}

double phase_distance(double a, double b) {
  double d = reduce_phase(a - b);
  return std::min(d, kTau - d);
}

double propagation_phase(double length_nm, double wavelength_nm) {
  if (!(wavelength_nm > 0.0)) {
    throw std::invalid_argument("propagation_phase: wavelength must be positive");
  }
  if (!(length_nm >= 0.0)) {
    throw std::invalid_argument("propagation_phase: length must be non-negative");
  }
  // Reduce the length modulo one wavelength first; fmod is exact, so the
  // result is periodic in the wavelength to the last bit.
  double remainder = std::fmod(length_nm, wavelength_nm);
  return reduce_phase(kTau * (remainder / wavelength_nm));
}

std::string_view violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateId: return "DuplicateId";
    case ViolationKind::DuplicateProducer: return "DuplicateProducer";
    case ViolationKind::DuplicateConsumer: return "DuplicateConsumer";
    case ViolationKind::DanglingMode: return "DanglingMode";
    case ViolationKind::UnconsumedMode: return "UnconsumedMode";
    case ViolationKind::CycleDetected: return "CycleDetected";
    case ViolationKind::UnreachableDetector: return "UnreachableDetector";
    case ViolationKind::MissingInput: return "MissingInput";
    case ViolationKind::BadSplitRatio: return "BadSplitRatio";
    case ViolationKind::BadBranchAmplitude: return "BadBranchAmplitude";
    case ViolationKind::NonFinitePhase: return "NonFinitePhase";
    case ViolationKind::PairModeOverlap: return "PairModeOverlap";
  }
  return "Unknown";
}

std::string Violation::str() const {
  std::string out{violation_kind_name(kind)};
  out += "(" + subject + "): " + message;
  return out;
}

const Element* Circuit::find_element(std::string_view id) const {
  for (const Element& e : elements) {
    if (e.id == id) {
      return &e;
    }
  }
  return nullptr;
}

const Source* Circuit::find_source(std::string_view id) const {
  for (const Source& s : sources) {
    if (s.id == id) {
      return &s;
    }
  }
  return nullptr;
}

const Detector* Circuit::find_detector(std::string_view id) const {
  for (const Detector& d : detectors) {
    if (d.id == id) {
      return &d;
    }
  }
  return nullptr;
}

double Circuit::segment_phase(const ModeId& mode) const {
  double total = 0.0;
  for (const Segment& s : segments) {
    if (s.mode == mode) {
      total += s.propagation_phase;
    }
  }
  return reduce_phase(total);
}

std::vector<ModeId> Circuit::modes() const {
  std::vector<ModeId> out;
  std::set<ModeId> seen;
  auto add = [&](const ModeId& m) {
    if (seen.insert(m).second) {
      out.push_back(m);
    }
  };
  for (const Source& s : sources) {
    if (const auto* single = std::get_if<SinglePhoton>(&s.kind)) {
      add(single->out);
    } else {
      const auto& pair = std::get<PairSource>(s.kind);
      add(pair.top[0]);
      add(pair.top[1]);
      add(pair.bottom[0]);
      add(pair.bottom[1]);
      if (pair.align_in) {
        add(*pair.align_in);
      }
    }
  }
  for (const Element& e : elements) {
    if (const auto* bs = std::get_if<BeamSplitter>(&e.kind)) {
      for (const auto& in : bs->in) {
        if (in) {
          add(*in);
        }
      }
      add(bs->out[0]);
      add(bs->out[1]);
    } else if (const auto* mirror = std::get_if<Mirror>(&e.kind)) {
      add(mirror->in);
      add(mirror->out);
    } else {
      const auto& shifter = std::get<PhaseShifter>(e.kind);
      add(shifter.in);
      add(shifter.out);
    }
  }
  for (const Segment& s : segments) {
    add(s.mode);
  }
  for (const Detector& d : detectors) {
    add(d.mode);
  }
  return out;
}

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_phases(const Circuit& circuit, std::vector<Violation>& out) {
  for (const Element& e : circuit.elements) {
    double phase = 0.0;
    if (const auto* bs = std::get_if<BeamSplitter>(&e.kind)) {
      phase = bs->reflection_phase;
      if (!finite(bs->amplitude_split) || std::abs(2.0 * bs->amplitude_split * bs->amplitude_split - 1.0) > 1e-9) {
        out.push_back({ViolationKind::BadSplitRatio, e.id,
                       "beam splitter amplitude_split must satisfy 2*split^2 = 1"});
      }
    } else if (const auto* mirror = std::get_if<Mirror>(&e.kind)) {
      phase = mirror->reflection_phase;
    } else {
      phase = std::get<PhaseShifter>(e.kind).value;
    }
    if (!finite(phase)) {
      out.push_back({ViolationKind::NonFinitePhase, e.id, "element phase is not finite"});
    }
  }
  for (const Segment& s : circuit.segments) {
    if (!finite(s.propagation_phase)) {
      out.push_back({ViolationKind::NonFinitePhase, s.mode, "segment phase is not finite"});
    }
  }
  for (const Source& s : circuit.sources) {
    if (const auto* pair = std::get_if<PairSource>(&s.kind)) {
      if (!finite(pair->branch_amplitude) || std::abs(pair->branch_amplitude - kInvSqrt2) > 1e-9) {
        out.push_back({ViolationKind::BadBranchAmplitude, s.id,
                       "pair source branch_amplitude must be 1/sqrt(2)"});
      }
      std::set<ModeId> emission{pair->top[0], pair->top[1], pair->bottom[0], pair->bottom[1]};
      if (emission.size() != 4) {
        out.push_back({ViolationKind::PairModeOverlap, s.id,
                       "pair source branch modes must be four distinct modes"});
      }
    }
  }
}

void check_ids(const Circuit& circuit, std::vector<Violation>& out) {
  std::set<std::string> ids;
  auto claim = [&](const std::string& id, const char* what) {
    if (!ids.insert(id).second) {
      out.push_back({ViolationKind::DuplicateId, id,
                     std::string(what) + " id '" + id + "' is already in use"});
    }
  };
  for (const Source& s : circuit.sources) {
    claim(s.id, "source");
  }
  for (const Element& e : circuit.elements) {
    claim(e.id, "element");
  }
  for (const Detector& d : circuit.detectors) {
    claim(d.id, "detector");
  }
  std::set<ModeId> segment_modes;
  for (const Segment& s : circuit.segments) {
    if (!segment_modes.insert(s.mode).second) {
      out.push_back({ViolationKind::DuplicateId, s.mode,
                     "mode '" + s.mode + "' has more than one segment declaration"});
    }
  }
}

void check_beam_splitter_ports(const Circuit& circuit, std::vector<Violation>& out) {
  for (const Element& e : circuit.elements) {
    if (const auto* bs = std::get_if<BeamSplitter>(&e.kind)) {
      if (!bs->in[0] && !bs->in[1]) {
        out.push_back({ViolationKind::MissingInput, e.id,
                       "beam splitter has no connected input port"});
      }
      if (bs->out[0] == bs->out[1]) {
        out.push_back({ViolationKind::DuplicateProducer, bs->out[0],
                       "beam splitter outputs must be distinct modes"});
      }
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Circuit& circuit) {
  std::vector<Violation> out;
  check_ids(circuit, out);
  check_phases(circuit, out);
  check_beam_splitter_ports(circuit, out);

  wiring::Wiring w = wiring::build_wiring(circuit);
  for (const auto& [mode, owners] : w.duplicate_producers) {
    out.push_back({ViolationKind::DuplicateProducer, mode,
                   "mode '" + mode + "' is produced more than once (also by '" + owners.front() +
                       "')"});
  }
  for (const auto& [mode, owners] : w.duplicate_consumers) {
    out.push_back({ViolationKind::DuplicateConsumer, mode,
                   "mode '" + mode + "' is consumed more than once (also by '" + owners.front() +
                       "')"});
  }
  for (const ModeId& mode : circuit.modes()) {
    bool produced = w.producer.count(mode) > 0;
    bool consumed = w.consumer.count(mode) > 0;
    if (!produced) {
      out.push_back({ViolationKind::DanglingMode, mode, "mode '" + mode + "' has no producer"});
    } else if (!consumed) {
      out.push_back({ViolationKind::UnconsumedMode, mode,
                     "mode '" + mode + "' is never consumed"});
    }
  }

  if (!wiring::topological_order(w)) {
    // Name one element that can never become ready.
    std::string witness;
    for (const wiring::Node& node : w.nodes) {
      for (const ModeId& in : node.ins) {
        auto it = w.producer.find(in);
        if (it != w.producer.end() && it->second.kind == wiring::Producer::Kind::Node) {
          witness = node.kind == wiring::NodeKind::Element ? circuit.elements[node.index].id
                                                           : circuit.sources[node.index].id;
        }
      }
    }
    out.push_back({ViolationKind::CycleDetected, witness,
                   "mode connections form a cycle in the propagation direction"});
  }

  std::vector<ModeId> roots;
  for (const Source& s : circuit.sources) {
    if (const auto* single = std::get_if<SinglePhoton>(&s.kind)) {
      roots.push_back(single->out);
    } else {
      const auto& pair = std::get<PairSource>(s.kind);
      roots.insert(roots.end(), {pair.top[0], pair.top[1], pair.bottom[0], pair.bottom[1]});
    }
  }
  std::vector<std::string> reachable = wiring::reachable_detectors(circuit, w, roots);
  std::set<std::string> reachable_set(reachable.begin(), reachable.end());
  for (const Detector& d : circuit.detectors) {
    if (!reachable_set.count(d.id)) {
      out.push_back({ViolationKind::UnreachableDetector, d.id,
                     "detector '" + d.id + "' is not reachable from any source"});
    }
  }
  return out;
}

std::complex<double> element_transfer(const Element& element, const ModeId& in_port,
                                      const ModeId& out_port) {
  if (const auto* bs = std::get_if<BeamSplitter>(&element.kind)) {
    for (int i = 0; i < 2; ++i) {
      if (!bs->in[i] || *bs->in[i] != in_port) {
        continue;
      }
      for (int j = 0; j < 2; ++j) {
        if (bs->out[j] != out_port) {
          continue;
        }
        if (i == j) {
          return {bs->amplitude_split, 0.0};
        }
        return bs->amplitude_split * std::polar(1.0, bs->reflection_phase);
      }
    }
  } else if (const auto* mirror = std::get_if<Mirror>(&element.kind)) {
    if (mirror->in == in_port && mirror->out == out_port) {
      return std::polar(1.0, mirror->reflection_phase);
    }
  } else {
    const auto& shifter = std::get<PhaseShifter>(element.kind);
    if (shifter.in == in_port && shifter.out == out_port) {
      return std::polar(1.0, shifter.value);
    }
  }
  throw std::invalid_argument("element_transfer: ('" + in_port + "', '" + out_port +
                              "') is not a port pair of element '" + element.id + "'");
}

Circuit with_phase_value(Circuit circuit, std::string_view shifter_id, double value) {
  for (Element& e : circuit.elements) {
    if (e.id == shifter_id) {
      if (auto* shifter = std::get_if<PhaseShifter>(&e.kind)) {
        shifter->value = reduce_phase(value);
        return circuit;
      }
      throw std::invalid_argument("with_phase_value: element '" + std::string(shifter_id) +
                                  "' is not a phase shifter");
    }
  }
  throw std::invalid_argument("with_phase_value: no element named '" + std::string(shifter_id) +
                              "'");
}

}  // namespace picsim
