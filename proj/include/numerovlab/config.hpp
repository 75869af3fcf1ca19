#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "numerovlab/analysis.hpp"
#include "numerovlab/mesh.hpp"
#include "numerovlab/rational.hpp"

namespace nlab {

/// Declarative experiment description: mesh source (exactly one of file,
/// inline steps, or uniform N), family multiplicity, scheme parameters, time
/// schedule, and output options.  Text form is sectioned key-value
/// ("[mesh] steps = ... / d"); parse(serialize(x)) == x.
struct ExperimentConfig {
  // [mesh]
  std::optional<std::string> mesh_file;
  std::optional<std::vector<long long>> inline_steps;
  std::optional<long long> inline_denominator;
  std::optional<int> uniform_intervals;
  Rational domain_length{1};
  int multiplicity = 1;  // K

  // [scheme]
  double a = 1.0;
  double sigma = 1.0 / 12.0;

  // [time]
  std::optional<double> tau;
  std::optional<TauRule> tau_rule;
  std::vector<double> horizons;             // T values
  std::optional<long long> steps_override;  // M
  std::vector<double> snapshot_times;

  // [output]
  std::string out_dir = ".";
  bool fixed_steps_mode = false;  ///< hold M (not tau) fixed across horizons

  bool operator==(const ExperimentConfig&) const = default;

  static ExperimentConfig parse(std::string_view text);
  std::string serialize() const;
  static ExperimentConfig load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

  /// Resolve the mesh source; throws unless exactly one source is set.
  Mesh base_mesh() const;
  /// The tau rule implied by tau/tau_rule (exactly one must be set when
  /// a schedule is needed).
  TauRule schedule() const;
};

} // namespace nlab
