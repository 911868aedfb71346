#include "picsim/oracle.hpp"

#include <stdexcept>

#include "wiring.hpp"

namespace picsim {

TransferMatrix::TransferMatrix(std::size_t size) : size_(size), a_(size * size) {}

TransferMatrix TransferMatrix::identity(std::size_t size) {
  TransferMatrix m(size);
  for (std::size_t i = 0; i < size; ++i) {
    m.at(i, i) = 1.0;
  }
  return m;
}

TransferMatrix TransferMatrix::operator*(const TransferMatrix& rhs) const {
  if (size_ != rhs.size_) {
    throw std::invalid_argument("TransferMatrix: size mismatch");
  }
  TransferMatrix out(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t k = 0; k < size_; ++k) {
      std::complex<double> lik = at(i, k);
      if (lik == std::complex<double>{}) {
        continue;
      }
      for (std::size_t j = 0; j < size_; ++j) {
        out.at(i, j) += lik * rhs.at(k, j);
      }
    }
  }
  return out;
}

double TransferMatrix::unitarity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t j = 0; j < size_; ++j) {
      std::complex<double> dot{0.0, 0.0};
      for (std::size_t k = 0; k < size_; ++k) {
        dot += std::conj(at(k, i)) * at(k, j);
      }
      if (i == j) {
        dot -= 1.0;
      }
      worst = std::max(worst, std::abs(dot));
    }
  }
  return worst;
}

namespace {

using wiring::Node;
using wiring::Wiring;

std::vector<int> ordered_nodes(const Wiring& wiring, std::optional<std::uint64_t> order_seed) {
  auto order = wiring::topological_order(wiring, order_seed);
  if (!order) {
    throw std::invalid_argument("circuit must be acyclic");
  }
  return *order;
}

/// Mode-vector propagation: amplitudes keyed by the mode they currently
/// occupy. A mode's segment phase applies once, when the mode is consumed.
class Propagator {
 public:
  Propagator(const Circuit& circuit, const Wiring& wiring, std::vector<int> order)
      : circuit_(circuit), wiring_(wiring), order_(std::move(order)) {}

  std::map<ModeId, std::complex<double>> run(const ModeId& origin) const {
    std::map<ModeId, std::complex<double>> amp;
    amp[origin] = {1.0, 0.0};
    for (int node_index : order_) {
      const Node& node = wiring_.nodes[node_index];
      std::map<ModeId, std::complex<double>> consumed;
      for (const ModeId& in : node.ins) {
        auto it = amp.find(in);
        if (it == amp.end()) {
          continue;
        }
        consumed[in] = it->second * std::polar(1.0, circuit_.segment_phase(in));
        amp.erase(it);
      }
      if (consumed.empty()) {
        continue;
      }
      for (const wiring::Transfer& t : node.transfers) {
        auto it = consumed.find(t.in);
        if (it != consumed.end()) {
          amp[t.out] += t.coeff * it->second;
        }
      }
    }
    return amp;
  }

  std::complex<double> detector_amplitude(const std::map<ModeId, std::complex<double>>& amp,
                                          const Detector& detector) const {
    auto it = amp.find(detector.mode);
    if (it == amp.end()) {
      return {0.0, 0.0};
    }
    return it->second * std::polar(1.0, circuit_.segment_phase(detector.mode));
  }

 private:
  const Circuit& circuit_;
  const Wiring& wiring_;
  std::vector<int> order_;
};

const Detector& detector_or_throw(const Circuit& circuit, std::string_view id) {
  const Detector* det = circuit.find_detector(id);
  if (det == nullptr) {
    throw std::invalid_argument("no detector named '" + std::string(id) + "'");
  }
  return *det;
}

}  // namespace

TransferMatrix transfer_matrix(const Circuit& circuit, ModeBasis* basis_out,
                               std::optional<std::uint64_t> order_seed) {
  Wiring w = wiring::build_wiring(circuit);
  std::vector<int> order = ordered_nodes(w, order_seed);

  ModeBasis basis;
  auto intern = [&basis](const ModeId& mode) {
    auto [it, inserted] = basis.index.emplace(mode, basis.order.size());
    if (inserted) {
      basis.order.push_back(mode);
    }
    return it->second;
  };
  for (const ModeId& mode : circuit.modes()) {
    intern(mode);
  }
  // Placeholder inputs keep every beam splitter block 2x2.
  std::vector<std::vector<std::size_t>> node_ins(w.nodes.size());
  std::vector<std::vector<std::size_t>> node_outs(w.nodes.size());
  for (std::size_t n = 0; n < w.nodes.size(); ++n) {
    const Node& node = w.nodes[n];
    if (node.kind == wiring::NodeKind::Element) {
      const Element& element = circuit.elements[node.index];
      if (const auto* bs = std::get_if<BeamSplitter>(&element.kind)) {
        for (int i = 0; i < 2; ++i) {
          node_ins[n].push_back(bs->in[i] ? intern(*bs->in[i])
                                          : intern("~" + element.id + ".in" + std::to_string(i)));
        }
        node_outs[n] = {intern(bs->out[0]), intern(bs->out[1])};
        continue;
      }
    }
    for (const ModeId& in : node.ins) {
      node_ins[n].push_back(intern(in));
    }
    for (const ModeId& out : node.outs) {
      node_outs[n].push_back(intern(out));
    }
  }

  const std::size_t dim = basis.order.size();
  TransferMatrix total = TransferMatrix::identity(dim);

  auto apply_segment_phases = [&](const std::vector<std::size_t>& modes) {
    TransferMatrix d = TransferMatrix::identity(dim);
    for (std::size_t m : modes) {
      d.at(m, m) = std::polar(1.0, circuit.segment_phase(basis.order[m]));
    }
    total = d * total;
  };

  for (int node_index : order) {
    const Node& node = w.nodes[node_index];
    apply_segment_phases(node_ins[node_index]);

    // Block unitary between the in and out subspaces; the adjoint block
    // keeps the embedding unitary and never carries forward amplitude in
    // an acyclic circuit.
    std::vector<std::vector<std::complex<double>>> block;
    if (node.kind == wiring::NodeKind::Element) {
      const Element& element = circuit.elements[node.index];
      if (const auto* bs = std::get_if<BeamSplitter>(&element.kind)) {
        std::complex<double> refl = bs->amplitude_split * std::polar(1.0, bs->reflection_phase);
        block = {{{bs->amplitude_split, 0.0}, refl}, {refl, {bs->amplitude_split, 0.0}}};
      } else if (const auto* mirror = std::get_if<Mirror>(&element.kind)) {
        block = {{std::polar(1.0, mirror->reflection_phase)}};
      } else {
        block = {{std::polar(1.0, std::get<PhaseShifter>(element.kind).value)}};
      }
    } else {
      block = {{{1.0, 0.0}}};
    }

    TransferMatrix e = TransferMatrix::identity(dim);
    const auto& ins = node_ins[node_index];
    const auto& outs = node_outs[node_index];
    for (std::size_t i = 0; i < ins.size(); ++i) {
      e.at(ins[i], ins[i]) = 0.0;
    }
    for (std::size_t j = 0; j < outs.size(); ++j) {
      e.at(outs[j], outs[j]) = 0.0;
    }
    for (std::size_t j = 0; j < outs.size(); ++j) {
      for (std::size_t i = 0; i < ins.size(); ++i) {
        e.at(outs[j], ins[i]) = block[j][i];
        e.at(ins[i], outs[j]) = std::conj(block[j][i]);
      }
    }
    total = e * total;
  }

  // Phases of detector-terminated modes apply at the readout.
  std::vector<std::size_t> detector_modes;
  for (const Detector& d : circuit.detectors) {
    detector_modes.push_back(intern(d.mode));
  }
  apply_segment_phases(detector_modes);

  if (basis_out != nullptr) {
    *basis_out = std::move(basis);
  }
  return total;
}

Amplitude single_photon_oracle(const Circuit& circuit, std::string_view source_id,
                               std::string_view detector_id,
                               std::optional<std::uint64_t> order_seed) {
  const Source* source = circuit.find_source(source_id);
  if (source == nullptr) {
    throw std::invalid_argument("no source named '" + std::string(source_id) + "'");
  }
  const auto* single = std::get_if<SinglePhoton>(&source->kind);
  if (single == nullptr) {
    throw std::invalid_argument("source '" + std::string(source_id) +
                                "' is not a single-photon source");
  }
  const Detector& detector = detector_or_throw(circuit, detector_id);

  Wiring w = wiring::build_wiring(circuit);
  Propagator propagator(circuit, w, ordered_nodes(w, order_seed));
  auto amp = propagator.run(single->out);
  return {propagator.detector_amplitude(amp, detector)};
}

Probability two_photon_oracle(const Circuit& circuit, std::string_view pair_source_id,
                              const JointOutcome& outcome,
                              std::optional<std::uint64_t> order_seed) {
  const Source* source = circuit.find_source(pair_source_id);
  if (source == nullptr) {
    throw std::invalid_argument("no source named '" + std::string(pair_source_id) + "'");
  }
  const auto* pair = std::get_if<PairSource>(&source->kind);
  if (pair == nullptr) {
    throw std::invalid_argument("source '" + std::string(pair_source_id) +
                                "' is not a pair source");
  }
  const Detector& d1 = detector_or_throw(circuit, outcome.detector_1);
  const Detector& d2 = detector_or_throw(circuit, outcome.detector_2);

  Wiring w = wiring::build_wiring(circuit);
  Propagator propagator(circuit, w, ordered_nodes(w, order_seed));

  auto origins = wiring::pair_origins(*pair);
  std::complex<double> projected{0.0, 0.0};
  for (int branch = 0; branch < 2; ++branch) {
    auto photon_1 = propagator.run(origins[0][branch]);
    auto photon_2 = propagator.run(origins[1][branch]);
    projected += propagator.detector_amplitude(photon_1, d1) *
                 propagator.detector_amplitude(photon_2, d2);
  }
  projected *= pair->branch_amplitude;
  return std::norm(projected);
}

}  // namespace picsim
