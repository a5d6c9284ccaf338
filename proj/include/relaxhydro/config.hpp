// config.hpp
// Run configuration: a versioned, line-oriented `key = value` format with
// [section] headers. Parsing reports line/column positions; validation
// reports rule ids and keeps warnings separate from fatal violations.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "relaxhydro/entropy.hpp"
#include "relaxhydro/potential.hpp"

namespace relaxhydro {

struct Violation {
  std::string rule;     // e.g. "parse", "positivity.epsilon", "restrict-m"
  std::string message;
  bool fatal = true;
};

enum class InitialKind { Uniform, GaussianBump, CosineBump };
enum class VelocityInit { Zero, WellPrepared };
enum class SnapshotFormat { Csv, Binary };

struct RunConfig {
  int schema = 1;
  std::string scenario = "custom";

  // grid
  int dim = 1;
  int n = 128;
  double half_width = 1.0;

  // entropy law
  double m = 2.0;
  double k = 1.0;

  // potentials
  PotentialSpec interaction;   // K
  PotentialSpec confinement;   // Phi
  double c_k = 0.0;

  // initial data
  InitialKind initial_kind = InitialKind::GaussianBump;
  double initial_baseline = 1.0;
  double initial_amplitude = 0.5;
  double initial_width = 0.25;
  std::array<int, 3> initial_modes{1, 1, 1};
  VelocityInit velocity_init = VelocityInit::WellPrepared;

  // solver
  std::vector<double> epsilons{0.1};  // one entry: single run; several: sweep
  double cfl = 0.45;
  double t_end = 0.5;
  int snapshot_stride = 16;
  double rho_floor = 1e-10;
  int limit_snapshots = 64;

  // outputs
  std::string output_directory = "out";
  SnapshotFormat snapshot_format = SnapshotFormat::Csv;

  unsigned long long seed = 42;

  EntropyLaw law() const { return EntropyLaw::power_law(m, k); }
};

struct LoadResult {
  std::optional<RunConfig> config;  // empty when a fatal violation occurred
  std::vector<Violation> violations;

  bool ok() const { return config.has_value(); }
  std::vector<Violation> warnings() const;
};

LoadResult load_config(const std::string& path);
LoadResult parse_config(const std::string& text);

// Round-trips a config (including the entropy-law section) through the
// documented format.
std::string serialize_config(const RunConfig& cfg);

// Entropy-law section alone (the law's serializable surface).
std::string serialize_entropy_law(const EntropyLaw& law);
EntropyLaw parse_entropy_law(const std::string& section_text);

}  // namespace relaxhydro
