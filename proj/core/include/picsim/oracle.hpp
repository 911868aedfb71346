#ifndef PICSIM_ORACLE_HPP
#define PICSIM_ORACLE_HPP

// Brute-force reference implementations used to cross-check the path
// engines. Everything here propagates mode vectors through per-element
// transfer blocks in topological order and never enumerates paths.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "picsim/circuit.hpp"
#include "picsim/entanglement.hpp"
#include "picsim/interference.hpp"

namespace picsim {

/// Dense square complex matrix indexed by mode.
class TransferMatrix {
 public:
  explicit TransferMatrix(std::size_t size);
  static TransferMatrix identity(std::size_t size);

  std::size_t size() const { return size_; }
  std::complex<double>& at(std::size_t row, std::size_t col) { return a_[row * size_ + col]; }
  const std::complex<double>& at(std::size_t row, std::size_t col) const {
    return a_[row * size_ + col];
  }

  TransferMatrix operator*(const TransferMatrix& rhs) const;

  /// Largest entry magnitude of (U^dagger U - I).
  double unitarity_defect() const;

 private:
  std::size_t size_ = 0;
  std::vector<std::complex<double>> a_;
};

/// Mode labels of the rows/columns of transfer_matrix(). Open beam
/// splitter inputs get synthesized placeholder modes so every block stays
/// a full 2x2.
struct ModeBasis {
  std::vector<ModeId> order;
  std::map<ModeId, std::size_t> index;
};

/// Whole-circuit transfer matrix: the product of per-element unitary
/// embeddings and segment phase factors in topological order. Throws
/// std::invalid_argument when the circuit is cyclic.
TransferMatrix transfer_matrix(const Circuit& circuit, ModeBasis* basis = nullptr,
                               std::optional<std::uint64_t> order_seed = {});

/// Detection amplitude computed by propagating a unit mode vector through
/// the per-element transfer blocks in topological order. `order_seed`
/// picks an arbitrary valid topological order.
Amplitude single_photon_oracle(const Circuit& circuit, std::string_view source_id,
                               std::string_view detector_id,
                               std::optional<std::uint64_t> order_seed = {});

/// Joint outcome probability computed by evolving the branch-superposed
/// two-photon state as a sum of tensor products of single-photon mode
/// vectors, then projecting on the outcome detectors.
Probability two_photon_oracle(const Circuit& circuit, std::string_view pair_source_id,
                              const JointOutcome& outcome,
                              std::optional<std::uint64_t> order_seed = {});

}  // namespace picsim

#endif
