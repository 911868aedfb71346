// picsim: parse circuit files, run analytic sweeps, sample detection
// events, and emit the built-in scenarios.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "picsim/dsl.hpp"
#include "picsim/entanglement.hpp"
#include "picsim/interference.hpp"
#include "picsim/montecarlo.hpp"
#include "picsim/oracle.hpp"
#include "picsim/scenarios.hpp"
#include "picsim/version.hpp"

namespace {

using nlohmann::json;
using namespace picsim;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("cannot read '" + path + "'");
  }
  return buffer.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot write '" + tmp.string() + "'");
    }
    out << content;
    if (!out.flush()) {
      throw IoError("cannot write '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
  }
}

Circuit load_circuit(const std::string& path) {
  std::string text = read_file(path);
  ParseResult result = parse(text);
  if (!result.ok()) {
    std::string diagnostics;
    for (const ParseError& error : result.errors) {
      diagnostics += path + ":" + error.str() + "\n";
    }
    throw ValidationError(diagnostics);
  }
  return std::move(*result.circuit);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string circuit_digest(const Circuit& circuit) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize(circuit))));
  return buf;
}

double parse_phase_or_usage(const std::string& text, const std::string& what) {
  std::string error;
  auto value = evaluate_phase_expr(text, &error);
  if (!value) {
    throw UsageError("bad " + what + " '" + text + "': " + error);
  }
  return *value;
}

struct PhaseRange {
  std::string shifter;
  double start = 0.0;
  double end = 0.0;
  long steps = 0;
};

// NAME=START:END:STEPS with START/END phase expressions. Samples are
// START + k*(END-START)/STEPS for k in [0, STEPS), the half-open grid.
PhaseRange parse_phase_range(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError("bad --phase '" + spec + "': expected NAME=START:END:STEPS");
  }
  PhaseRange range;
  range.shifter = spec.substr(0, eq);
  std::string rest = spec.substr(eq + 1);
  auto c1 = rest.find(':');
  auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw UsageError("bad --phase '" + spec + "': expected NAME=START:END:STEPS");
  }
  range.start = parse_phase_or_usage(rest.substr(0, c1), "range start");
  range.end = parse_phase_or_usage(rest.substr(c1 + 1, c2 - c1 - 1), "range end");
  std::string steps_text = rest.substr(c2 + 1);
  try {
    std::size_t used = 0;
    range.steps = std::stol(steps_text, &used);
    if (used != steps_text.size()) {
      throw std::invalid_argument(steps_text);
    }
  } catch (const std::exception&) {
    throw UsageError("bad --phase '" + spec + "': steps must be an integer");
  }
  if (range.steps < 1) {
    throw UsageError("bad --phase '" + spec + "': steps must be at least 1");
  }
  return range;
}

std::pair<std::string, double> parse_phase_assignment(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError("bad --phase '" + spec + "': expected NAME=EXPR");
  }
  return {spec.substr(0, eq), parse_phase_or_usage(spec.substr(eq + 1), "phase value")};
}

std::string fmt12(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

const Source* find_pair_source(const Circuit& circuit) {
  const Source* found = nullptr;
  for (const Source& s : circuit.sources) {
    if (std::holds_alternative<PairSource>(s.kind)) {
      if (found != nullptr) {
        return nullptr;
      }
      found = &s;
    }
  }
  return found;
}

const Source* find_single_source(const Circuit& circuit) {
  const Source* found = nullptr;
  for (const Source& s : circuit.sources) {
    if (std::holds_alternative<SinglePhoton>(s.kind)) {
      if (found != nullptr) {
        return nullptr;
      }
      found = &s;
    }
  }
  return found;
}

json phases_json(const Circuit& circuit) {
  json out = json::object();
  for (const Element& e : circuit.elements) {
    if (const auto* shifter = std::get_if<PhaseShifter>(&e.kind)) {
      out[e.id] = shifter->value;
    }
  }
  return out;
}

json report_header(const Circuit& circuit, const std::string& computation) {
  return json{{"schema", 1},
              {"tool_version", kVersion},
              {"circuit_digest", circuit_digest(circuit)},
              {"computation", computation}};
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const std::string& path) {
  std::string text = read_file(path);
  ParseResult result = parse(text);
  if (!result.ok()) {
    for (const ParseError& error : result.errors) {
      std::cerr << path << ":" << error.str() << "\n";
    }
    return kExitValidation;
  }
  std::cout << "OK\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct ArmPair {
  std::array<std::string, 2> arm1;
  std::array<std::string, 2> arm2;
};

ArmPair resolve_arms(const Circuit& circuit, const std::string& pair_id, const std::string& d1,
                     const std::string& d2) {
  auto arms = detector_arms(circuit, pair_id);
  if (arms[0].size() != 2 || arms[1].size() != 2) {
    throw ValidationError("circuit does not have two detectors per photon arm\n");
  }
  auto pick = [](const std::vector<std::string>& arm, const std::string& primary,
                 const char* flag) {
    if (primary == arm[0]) {
      return std::array<std::string, 2>{arm[0], arm[1]};
    }
    if (primary == arm[1]) {
      return std::array<std::string, 2>{arm[1], arm[0]};
    }
    throw UsageError("--" + std::string(flag) + " detector '" + primary +
                     "' is not in the expected photon arm");
  };
  return {pick(arms[0], d1, "joint"), pick(arms[1], d2, "joint")};
}

int cmd_sweep(const std::string& path, const std::string& phase_spec, const std::string& joint,
              const std::string& detector, const std::string& out_path) {
  PhaseRange range = parse_phase_range(phase_spec);
  Circuit circuit = load_circuit(path);
  const Element* shifter = circuit.find_element(range.shifter);
  if (shifter == nullptr || !std::holds_alternative<PhaseShifter>(shifter->kind)) {
    throw UsageError("no phase shifter named '" + range.shifter + "' in the circuit");
  }
  if (joint.empty() == detector.empty()) {
    throw UsageError("exactly one of --joint or --detector is required");
  }

  const double step = (range.end - range.start) / static_cast<double>(range.steps);
  std::vector<double> values;
  for (long k = 0; k < range.steps; ++k) {
    values.push_back(range.start + static_cast<double>(k) * step);
  }

  std::string csv;
  if (!joint.empty()) {
    const Source* pair = find_pair_source(circuit);
    if (pair == nullptr) {
      throw UsageError("--joint requires a circuit with one pair source");
    }
    auto comma = joint.find(',');
    if (comma == std::string::npos) {
      throw UsageError("--joint expects D1,D2");
    }
    ArmPair arms =
        resolve_arms(circuit, pair->id, joint.substr(0, comma), joint.substr(comma + 1));

    // Column phases: the circuit's shifters, sorted by id; the swept one
    // varies and the other keeps its circuit value.
    std::vector<std::string> shifters;
    for (const Element& e : circuit.elements) {
      if (std::holds_alternative<PhaseShifter>(e.kind)) {
        shifters.push_back(e.id);
      }
    }
    std::sort(shifters.begin(), shifters.end());
    csv = "phi1,phi2,p_u1u2,p_u1l2,p_l1u2,p_l1l2,p_u1,p_l1,p_u2,p_l2\n";
    for (double value : values) {
      Circuit sample = with_phase_value(circuit, range.shifter, value);
      ProbabilityTable table = joint_probability_table(sample, pair->id, arms.arm1, arms.arm2);
      double phi[2] = {0.0, 0.0};
      for (std::size_t s = 0; s < shifters.size() && s < 2; ++s) {
        const Element* e = sample.find_element(shifters[s]);
        phi[s] = std::get<PhaseShifter>(e->kind).value;
      }
      csv += fmt12(phi[0]) + "," + fmt12(phi[1]);
      csv += "," + fmt12(table.joint[0][0]) + "," + fmt12(table.joint[0][1]);
      csv += "," + fmt12(table.joint[1][0]) + "," + fmt12(table.joint[1][1]);
      csv += "," + fmt12(table.marginals.at(arms.arm1[0]));
      csv += "," + fmt12(table.marginals.at(arms.arm1[1]));
      csv += "," + fmt12(table.marginals.at(arms.arm2[0]));
      csv += "," + fmt12(table.marginals.at(arms.arm2[1]));
      csv += "\n";
    }
  } else {
    if (circuit.find_detector(detector) == nullptr) {
      throw UsageError("no detector named '" + detector + "' in the circuit");
    }
    csv = "phi,p\n";
    const Source* single = find_single_source(circuit);
    const Source* pair = single == nullptr ? find_pair_source(circuit) : nullptr;
    if (single != nullptr) {
      auto sweep = fringe_sweep(circuit, range.shifter, values, detector);
      for (const auto& [value, probability] : sweep) {
        csv += fmt12(value) + "," + fmt12(probability) + "\n";
      }
    } else if (pair != nullptr) {
      auto arms = detector_arms(circuit, pair->id);
      if (arms[0].size() != 2 || arms[1].size() != 2) {
        throw ValidationError("circuit does not have two detectors per photon arm\n");
      }
      for (double value : values) {
        Circuit sample = with_phase_value(circuit, range.shifter, value);
        ProbabilityTable table = joint_probability_table(
            sample, pair->id, {arms[0][0], arms[0][1]}, {arms[1][0], arms[1][1]});
        csv += fmt12(value) + "," + fmt12(marginal_probability(table, detector)) + "\n";
      }
    } else {
      throw UsageError("circuit must have exactly one source");
    }
  }

  atomic_write(out_path, csv);
  json report = report_header(circuit, "sweep");
  report["rows"] = values.size();
  report["out"] = out_path;
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sample

int cmd_sample(const std::string& path, long long n, std::uint64_t seed,
               const std::vector<std::string>& phase_specs, const std::string& joint,
               const std::string& out_path, const std::string& summary_path) {
  if (n < 0) {
    throw UsageError("-n must be non-negative");
  }
  Circuit circuit = load_circuit(path);
  for (const std::string& spec : phase_specs) {
    auto [name, value] = parse_phase_assignment(spec);
    try {
      circuit = with_phase_value(circuit, name, value);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const Source* pair = find_pair_source(circuit);
  if (pair == nullptr) {
    throw UsageError("sample requires a circuit with one pair source");
  }

  ArmPair arms{};
  if (!joint.empty()) {
    auto comma = joint.find(',');
    if (comma == std::string::npos) {
      throw UsageError("--joint expects D1,D2");
    }
    arms = resolve_arms(circuit, pair->id, joint.substr(0, comma), joint.substr(comma + 1));
  } else {
    auto reachable = detector_arms(circuit, pair->id);
    if (reachable[0].size() != 2 || reachable[1].size() != 2) {
      throw ValidationError("circuit does not have two detectors per photon arm\n");
    }
    arms = {std::array{reachable[0][0], reachable[0][1]},
            std::array{reachable[1][0], reachable[1][1]}};
  }

  ProbabilityTable table = joint_probability_table(circuit, pair->id, arms.arm1, arms.arm2);
  std::vector<EventRecord> events = sample_events(table, n, seed);
  atomic_write(out_path, events_csv(events));

  JointCounts joint_counts = coincidence_counts(events);
  SinglesCounts singles = singles_counts(events);

  json report = report_header(circuit, "sample");
  report["n"] = n;
  report["seed"] = seed;
  report["phases"] = phases_json(circuit);
  report["events_out"] = out_path;
  json joint_json = json::array();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      JointOutcome outcome{table.arm1[i], table.arm2[j]};
      std::int64_t count = joint_counts.count(outcome);
      joint_json.push_back({{"detector_1", outcome.detector_1},
                            {"detector_2", outcome.detector_2},
                            {"count", count},
                            {"frequency", n > 0 ? static_cast<double>(count) / n : 0.0},
                            {"analytic", table.joint[i][j]}});
    }
  }
  report["joint"] = joint_json;
  json singles_json = json::array();
  for (const std::string& id : {table.arm1[0], table.arm1[1], table.arm2[0], table.arm2[1]}) {
    std::int64_t count = singles.count(id);
    singles_json.push_back({{"detector", id},
                            {"count", count},
                            {"frequency", n > 0 ? static_cast<double>(count) / n : 0.0},
                            {"analytic", marginal_probability(table, id)}});
  }
  report["singles"] = singles_json;

  std::string dumped = report.dump(2);
  std::cout << dumped << "\n";
  if (!summary_path.empty()) {
    atomic_write(summary_path, dumped + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// scenario

int cmd_scenario(const std::string& name, const std::string& phi, const std::string& phi1,
                 const std::string& phi2, const std::string& object_phase,
                 const std::string& image_path, bool distinguishable,
                 const std::string& out_dir) {
  Circuit circuit;
  json results;
  std::optional<IntensityImagePair> grids;

  if (name == "mzi") {
    double value = phi.empty() ? 0.0 : parse_phase_or_usage(phi, "--phi");
    circuit = build_mzi(value);
    results["probabilities"] = {
        {std::string(kMziBright),
         detection_probability(first_order_amplitude(circuit, kMziSource, kMziBright))},
        {std::string(kMziDark),
         detection_probability(first_order_amplitude(circuit, kMziSource, kMziDark))}};
  } else if (name == "jaeger") {
    double v1 = phi1.empty() ? 0.0 : parse_phase_or_usage(phi1, "--phi1");
    double v2 = phi2.empty() ? 0.0 : parse_phase_or_usage(phi2, "--phi2");
    circuit = build_jaeger(v1, v2);
    ProbabilityTable table = jaeger_table(circuit);
    results["joint"] = {{"U1,U2", table.joint[0][0]},
                        {"U1,L2", table.joint[0][1]},
                        {"L1,U2", table.joint[1][0]},
                        {"L1,L2", table.joint[1][1]}};
    json marginals = json::object();
    for (const auto& [id, p] : table.marginals) {
      marginals[id] = p;
    }
    results["marginals"] = marginals;
  } else if (name == "lemos") {
    double value = object_phase.empty() ? 0.0 : parse_phase_or_usage(object_phase, "--object-phase");
    circuit = build_lemos(value, distinguishable);
    if (!image_path.empty()) {
      PhaseImage image = parse_phase_image_csv(read_file(image_path));
      grids = lemos_image(image, distinguishable);
      results["image"] = {{"width", image.width}, {"height", image.height}};
    }
    LemosSignal signal = lemos_signal_probabilities(circuit);
    results["signal"] = {{std::string(kLemosG), signal.g}, {std::string(kLemosH), signal.h}};
    results["distinguishable"] = distinguishable;
  } else {
    throw UsageError("unknown scenario '" + name + "'; valid names: mzi, jaeger, lemos");
  }

  json report = report_header(circuit, "scenario");
  report["scenario"] = name;
  report["results"] = results;

  if (!out_dir.empty()) {
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      throw IoError("cannot create directory '" + out_dir + "'");
    }
    atomic_write(dir / (name + ".pic"), serialize(circuit));
    if (grids) {
      atomic_write(dir / "g.csv", intensity_grid_csv(grids->width, grids->height, grids->g));
      atomic_write(dir / "h.csv", intensity_grid_csv(grids->width, grids->height, grids->h));
    }
    atomic_write(dir / "results.json", report.dump(2) + "\n");
  }
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photonic interferometer circuit simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string in_path, out_path, summary_path, phase_spec, joint, detector;
  std::vector<std::string> phase_assignments;
  long long n = 0;
  std::uint64_t seed = 0;

  CLI::App* validate_cmd = app.add_subcommand("validate", "parse and validate a .pic file");
  validate_cmd->add_option("file", in_path, "circuit file")->required();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "tabulate probabilities over a phase range");
  sweep_cmd->add_option("file", in_path, "circuit file")->required();
  sweep_cmd->add_option("--phase", phase_spec, "NAME=START:END:STEPS")->required();
  sweep_cmd->add_option("--joint", joint, "D1,D2 joint-table sweep");
  sweep_cmd->add_option("--detector", detector, "single-detector sweep");
  sweep_cmd->add_option("--out", out_path, "output CSV path")->required();

  CLI::App* sample_cmd = app.add_subcommand("sample", "sample detection events");
  sample_cmd->add_option("file", in_path, "circuit file")->required();
  sample_cmd->add_option("-n", n, "number of trials")->required();
  sample_cmd->add_option("--seed", seed, "RNG seed");
  sample_cmd->add_option("--phase", phase_assignments, "NAME=EXPR (repeatable)");
  sample_cmd->add_option("--joint", joint, "D1,D2 outcome ordering");
  sample_cmd->add_option("--out", out_path, "event CSV path")->required();
  sample_cmd->add_option("--summary", summary_path, "also write the JSON summary here");

  std::string scenario_name, phi, phi1, phi2, object_phase, image_path, out_dir;
  bool distinguishable = false;
  CLI::App* scenario_cmd = app.add_subcommand("scenario", "emit a built-in setup");
  scenario_cmd->add_option("name", scenario_name, "mzi | jaeger | lemos")->required();
  scenario_cmd->add_option("--phi", phi, "mzi shifter value");
  scenario_cmd->add_option("--phi1", phi1, "jaeger arm-1 shifter");
  scenario_cmd->add_option("--phi2", phi2, "jaeger arm-2 shifter");
  scenario_cmd->add_option("--object-phase", object_phase, "lemos object phase");
  scenario_cmd->add_option("--image", image_path, "lemos phase-image CSV");
  scenario_cmd->add_flag("--distinguishable", distinguishable,
                         "separate the lemos idler beams");
  scenario_cmd->add_option("--out", out_dir, "directory for emitted files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) {
      return cmd_validate(in_path);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(in_path, phase_spec, joint, detector, out_path);
    }
    if (sample_cmd->parsed()) {
      return cmd_sample(in_path, n, seed, phase_assignments, joint, out_path, summary_path);
    }
    if (scenario_cmd->parsed()) {
      return cmd_scenario(scenario_name, phi, phi1, phi2, object_phase, image_path,
                          distinguishable, out_dir);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << e.what();
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
