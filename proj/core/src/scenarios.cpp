#include "picsim/scenarios.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace picsim {

Circuit build_mzi(double phase_value) {
  Circuit c;
  c.sources.push_back({std::string(kMziSource), SinglePhoton{"e1"}});
  c.elements.push_back({"BS1", BeamSplitter{{ModeId("e1"), std::nullopt}, {"b1", "t1"}}});
  c.elements.push_back({"MA", Mirror{"t1", "t2"}});
  c.elements.push_back({std::string(kMziShifter),
                        PhaseShifter{"t2", "t3", reduce_phase(phase_value)}});
  c.elements.push_back({"MB", Mirror{"b1", "b2"}});
  c.elements.push_back({"BS2", BeamSplitter{{ModeId("t3"), ModeId("b2")}, {"c", "d"}}});
  c.detectors.push_back({std::string(kMziBright), "c"});
  c.detectors.push_back({std::string(kMziDark), "d"});
  return c;
}

Circuit build_jaeger(double phi1, double phi2) {
  Circuit c;
  PairSource pair;
  pair.top = {"a1", "a2"};
  pair.bottom = {"b1", "b2"};
  c.sources.push_back({std::string(kPairSource), pair});
  c.elements.push_back({std::string(kJaegerShifter1),
                        PhaseShifter{"a1", "a1p", reduce_phase(phi1)}});
  c.elements.push_back({std::string(kJaegerShifter2),
                        PhaseShifter{"a2", "a2p", reduce_phase(phi2)}});
  c.elements.push_back({"H1", BeamSplitter{{ModeId("a1p"), ModeId("b1")}, {"u1", "l1"}}});
  c.elements.push_back({"H2", BeamSplitter{{ModeId("a2p"), ModeId("b2")}, {"u2", "l2"}}});
  c.detectors.push_back({std::string(kJaegerU1), "u1"});
  c.detectors.push_back({std::string(kJaegerL1), "l1"});
  c.detectors.push_back({std::string(kJaegerU2), "u2"});
  c.detectors.push_back({std::string(kJaegerL2), "l2"});
  return c;
}

Circuit build_lemos(double object_phase, bool distinguishable) {
  Circuit c;
  PairSource pair;
  pair.top = {"s1", "i1"};
  pair.bottom = {"s2", "i2"};
  if (!distinguishable) {
    pair.align_in = "x";
  }
  c.sources.push_back({std::string(kPairSource), pair});
  c.elements.push_back({std::string(kLemosObject),
                        PhaseShifter{"i1", "x", reduce_phase(object_phase)}});
  // Quarter-turn on the object leg so object_phase = 0 lands fully on g.
  c.segments.push_back({"x", kHalfPi});
  c.elements.push_back({"BS", BeamSplitter{{ModeId("s1"), ModeId("s2")}, {"mg", "mh"}}});
  c.detectors.push_back({std::string(kLemosG), "mg"});
  c.detectors.push_back({std::string(kLemosH), "mh"});
  c.detectors.push_back({std::string(kLemosIdler), "i2"});
  if (distinguishable) {
    c.detectors.push_back({std::string(kLemosDump), "x"});
  }
  return c;
}

ProbabilityTable jaeger_table(const Circuit& circuit) {
  return joint_probability_table(circuit, kPairSource,
                                 {std::string(kJaegerU1), std::string(kJaegerL1)},
                                 {std::string(kJaegerU2), std::string(kJaegerL2)});
}

LemosSignal lemos_signal_probabilities(const Circuit& circuit) {
  auto arms = detector_arms(circuit, kPairSource);
  LemosSignal signal;
  for (const std::string& partner : arms[1]) {
    signal.g += detection_probability(
        joint_amplitude(circuit, kPairSource, {std::string(kLemosG), partner}));
    signal.h += detection_probability(
        joint_amplitude(circuit, kPairSource, {std::string(kLemosH), partner}));
  }
  return signal;
}

IntensityImagePair lemos_image(const PhaseImage& image, bool distinguishable) {
  if (image.phases.size() != image.width * image.height) {
    throw std::invalid_argument("lemos_image: phase grid size does not match dimensions");
  }
  IntensityImagePair out;
  out.width = image.width;
  out.height = image.height;
  out.g.resize(image.phases.size());
  out.h.resize(image.phases.size());
  for (std::size_t i = 0; i < image.phases.size(); ++i) {
    LemosSignal signal =
        lemos_signal_probabilities(build_lemos(image.phases[i], distinguishable));
    out.g[i] = signal.g;
    out.h[i] = signal.h;
  }
  return out;
}

PhaseImage parse_phase_image_csv(std::string_view text) {
  PhaseImage image;
  std::size_t start = 0;
  int line_number = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    std::string_view line =
        end == std::string_view::npos ? text.substr(start) : text.substr(start, end - start);
    start = end == std::string_view::npos ? text.size() : end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    bool blank = line.find_first_not_of(" \t") == std::string_view::npos;
    if (blank) {
      continue;
    }
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      std::string_view cell =
          comma == std::string_view::npos ? line.substr(pos) : line.substr(pos, comma - pos);
      std::size_t lo = cell.find_first_not_of(" \t");
      std::size_t hi = cell.find_last_not_of(" \t");
      if (lo == std::string_view::npos) {
        throw std::runtime_error("phase image: line " + std::to_string(line_number) +
                                 ": empty cell");
      }
      cell = cell.substr(lo, hi - lo + 1);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        throw std::runtime_error("phase image: line " + std::to_string(line_number) +
                                 ": bad number '" + std::string(cell) + "'");
      }
      row.push_back(value);
      if (comma == std::string_view::npos) {
        break;
      }
      pos = comma + 1;
    }
    if (image.width == 0) {
      image.width = row.size();
    } else if (row.size() != image.width) {
      throw std::runtime_error("phase image: line " + std::to_string(line_number) +
                               ": expected " + std::to_string(image.width) + " columns, got " +
                               std::to_string(row.size()));
    }
    image.phases.insert(image.phases.end(), row.begin(), row.end());
    ++image.height;
  }
  if (image.width == 0 || image.height == 0) {
    throw std::runtime_error("phase image: no rows");
  }
  return image;
}

std::string intensity_grid_csv(std::size_t width, std::size_t height,
                               const std::vector<double>& values) {
  if (values.size() != width * height) {
    throw std::invalid_argument("intensity_grid_csv: grid size does not match dimensions");
  }
  std::string out;
  char buf[40];
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      std::snprintf(buf, sizeof buf, "%.12g", values[y * width + x]);
      out += buf;
      out += x + 1 < width ? "," : "\n";
    }
  }
  return out;
}

}  // namespace picsim
