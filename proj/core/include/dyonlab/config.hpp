#ifndef DYONLAB_CONFIG_HPP
#define DYONLAB_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "dyonlab/dynamics.hpp"
#include "dyonlab/model.hpp"
#include "dyonlab/quantum.hpp"

namespace dyonlab {

enum class Command { Simulate, Spectrum, FieldsCheck, SelectionRules, Poincare, VerifyAll };
enum class OutputFormat { Csv, Json };

// One experiment, parsed from a sectioned key-value file:
//   command/seed at top level, then [metric], [system], [[centers]],
//   [integrator], [quantum], [output]. Unknown sections or keys are
//   rejected with line diagnostics.
struct ExperimentConfig {
  Command command = Command::Simulate;
  std::uint64_t seed = 0;

  SystemSpec system;

  // [integrator]
  Integrator scheme = Integrator::RK4;
  std::optional<double> h;  // auto-derived from the Coulomb strength when unset
  double t_end = 100.0;
  int stride = 1;
  std::optional<Vec3> x0;
  std::optional<Vec3> pi0;
  std::optional<double> energy;
  std::optional<double> jmag;
  TurningBranch branch = TurningBranch::Perihelion;
  Vec3 section_normal{0.0, 0.0, 1.0};
  double section_offset = 0.0;
  int section_direction = 1;
  int crossings = 400;
  double section_t_max = 4000.0;

  // [quantum]
  std::optional<double> quantum_s;  // defaults to the system's monopole number
  double l_max = 3.0;
  double n_max = 4.0;
  RadialGrid grid;
  double selection_threshold = 1e-12;
  double stark_field = 0.01;

  // [output]
  std::string out_dir = ".";
  std::string prefix;
  OutputFormat format = OutputFormat::Csv;

  double resolved_h() const;
  double resolved_quantum_s() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Canonical normal form: every key emitted, fixed order, full-precision
// floats. parse(serialize(c)) reproduces c and serialize is idempotent on
// its own output.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace dyonlab

#endif
