#include "picsim/path_engine.hpp"

#include <stdexcept>

#include "wiring.hpp"

namespace picsim {

namespace {

int segment_index(const Circuit& circuit, const ModeId& mode) {
  for (int i = 0; i < static_cast<int>(circuit.segments.size()); ++i) {
    if (circuit.segments[i].mode == mode) {
      return i;
    }
  }
  return -1;
}

struct Walker {
  const Circuit& circuit;
  const wiring::Wiring& wiring_;
  std::string_view detector_id;
  std::optional<BranchLabel> branch;
  std::vector<Hop> hops;
  std::vector<Path>* out;

  void walk(const ModeId& mode) {
    int seg = segment_index(circuit, mode);
    if (seg >= 0) {
      hops.push_back({Hop::Kind::Segment, seg, mode, mode});
    }
    auto it = wiring_.consumer.find(mode);
    if (it != wiring_.consumer.end()) {
      if (it->second.kind == wiring::Consumer::Kind::Detector) {
        const Detector& det = circuit.detectors[it->second.index];
        if (det.id == detector_id) {
          out->push_back({branch, hops, det.id});
        }
      } else {
        const wiring::Node& node = wiring_.nodes[it->second.index];
        for (const wiring::Transfer& t : node.transfers) {
          if (t.in != mode) {
            continue;
          }
          Hop::Kind kind =
              node.kind == wiring::NodeKind::Element ? Hop::Kind::Element : Hop::Kind::Passthrough;
          hops.push_back({kind, node.index, t.in, t.out});
          walk(t.out);
          hops.pop_back();
        }
      }
    }
    if (seg >= 0) {
      hops.pop_back();
    }
  }
};

}  // namespace

std::string_view branch_label_name(BranchLabel branch) {
  return branch == BranchLabel::Top ? "top" : "bottom";
}

Kernel compose(const Kernel& k1, const Kernel& k2) {
  return {k1.amplitude * k2.amplitude};
}

PathOrigin single_photon_origin(const Circuit& circuit, std::string_view source_id) {
  const Source* source = circuit.find_source(source_id);
  if (source == nullptr) {
    throw std::invalid_argument("no source named '" + std::string(source_id) + "'");
  }
  const auto* single = std::get_if<SinglePhoton>(&source->kind);
  if (single == nullptr) {
    throw std::invalid_argument("source '" + std::string(source_id) +
                                "' is not a single-photon source");
  }
  return {single->out, std::nullopt};
}

PathOrigin pair_branch_origin(const Circuit& circuit, std::string_view source_id,
                              BranchLabel branch, Arm arm) {
  const Source* source = circuit.find_source(source_id);
  if (source == nullptr) {
    throw std::invalid_argument("no source named '" + std::string(source_id) + "'");
  }
  const auto* pair = std::get_if<PairSource>(&source->kind);
  if (pair == nullptr) {
    throw std::invalid_argument("source '" + std::string(source_id) + "' is not a pair source");
  }
  const auto& modes = branch == BranchLabel::Top ? pair->top : pair->bottom;
  return {modes[static_cast<int>(arm)], branch};
}

std::vector<Path> enumerate_paths(const Circuit& circuit, const PathOrigin& origin,
                                  std::string_view detector_id) {
  if (circuit.find_detector(detector_id) == nullptr) {
    throw std::invalid_argument("no detector named '" + std::string(detector_id) + "'");
  }
  wiring::Wiring w = wiring::build_wiring(circuit);
  std::vector<Path> paths;
  Walker walker{circuit, w, detector_id, origin.branch, {}, &paths};
  walker.walk(origin.mode);
  return paths;
}

std::vector<Path> enumerate_pair_paths(const Circuit& circuit, std::string_view source_id,
                                       Arm arm, std::string_view detector_id) {
  std::vector<Path> paths;
  for (BranchLabel branch : {BranchLabel::Top, BranchLabel::Bottom}) {
    PathOrigin origin = pair_branch_origin(circuit, source_id, branch, arm);
    std::vector<Path> found = enumerate_paths(circuit, origin, detector_id);
    paths.insert(paths.end(), found.begin(), found.end());
  }
  return paths;
}

Kernel path_kernel(const Circuit& circuit, const Path& path) {
  Kernel kernel;
  const ModeId* expected_in = nullptr;
  for (const Hop& hop : path.hops) {
    if (expected_in != nullptr && hop.in != *expected_in) {
      throw std::invalid_argument("path_kernel: hop list is not connected at mode '" + hop.in +
                                  "'");
    }
    switch (hop.kind) {
      case Hop::Kind::Element: {
        if (hop.index < 0 || hop.index >= static_cast<int>(circuit.elements.size())) {
          throw std::invalid_argument("path_kernel: hop references a missing element");
        }
        const Element& element = circuit.elements[hop.index];
        kernel.amplitude *= element_transfer(element, hop.in, hop.out);
        break;
      }
      case Hop::Kind::Segment: {
        if (hop.index < 0 || hop.index >= static_cast<int>(circuit.segments.size()) ||
            circuit.segments[hop.index].mode != hop.in || hop.in != hop.out) {
          throw std::invalid_argument("path_kernel: hop references a missing segment");
        }
        kernel.amplitude *= std::polar(1.0, circuit.segments[hop.index].propagation_phase);
        break;
      }
      case Hop::Kind::Passthrough: {
        if (hop.index < 0 || hop.index >= static_cast<int>(circuit.sources.size())) {
          throw std::invalid_argument("path_kernel: hop references a missing source");
        }
        const auto* pair = std::get_if<PairSource>(&circuit.sources[hop.index].kind);
        if (pair == nullptr || !pair->align_in || *pair->align_in != hop.in ||
            pair->bottom[1] != hop.out) {
          throw std::invalid_argument("path_kernel: hop is not the source's pass-through port");
        }
        break;  // unit amplitude
      }
    }
    expected_in = &hop.out;
  }
  return kernel;
}

std::complex<double> summed_kernel(const Circuit& circuit, const PathOrigin& origin,
                                   std::string_view detector_id) {
  std::complex<double> sum{0.0, 0.0};
  for (const Path& path : enumerate_paths(circuit, origin, detector_id)) {
    sum += path_kernel(circuit, path).amplitude;
  }
  return sum;
}

}  // namespace picsim
