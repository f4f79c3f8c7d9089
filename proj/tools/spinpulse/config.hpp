#pragma once

// Experiment configuration: strict JSON schema, defaults resolved up front so
// the echoed config fully determines the output.

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinpulse/propagator.hpp"
#include "spinpulse/pulse_models.hpp"
#include "spinpulse/quadrature.hpp"

namespace spinpulse::cli {

enum class Experiment { EffectiveParams, Propagate, Compare, TailorSweep, Figure1, Scaling };
enum class OutputFormat { Csv, JsonLines };

std::string to_string(Experiment e);
std::optional<Experiment> parse_experiment(const std::string& name);

/// Anything wrong with the configuration itself; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::EffectiveParams;
  /// Normalized pulse and anisotropy descriptions, every default filled in.
  nlohmann::json pulse;
  nlohmann::json anisotropy;
  QuadratureSpec quadrature;
  double propagation_tol = 1e-11;
  /// Ascending; empty means "the pulse's own lambda".
  std::vector<double> sweep;
  std::vector<double> scales;
  std::optional<std::string> output;
  OutputFormat format = OutputFormat::Csv;

  /// Everything that influences the output, for the header. The output path
  /// is left out so a header can be replayed into a different file.
  nlohmann::json resolved() const;
};

struct Overrides {
  std::optional<std::string> output;
  std::optional<OutputFormat> format;
  std::optional<double> rtol;
  std::optional<double> tol;
};

/// Reads a config file. Files starting with '#' are treated as outputs of an
/// earlier run and the embedded config line is used.
nlohmann::json load_config_file(const std::filesystem::path& path);

ExperimentConfig parse_config(const nlohmann::json& j, Experiment command,
                              const Overrides& overrides = {});

/// Pulse for a given lambda: sech2 keeps tau and rescales J0, tailored pulses
/// retailor, tables are rescaled. Without a lambda, the configured pulse.
PulseProfile build_pulse(const nlohmann::json& pulse, std::optional<double> lambda = std::nullopt);
AnisotropyProfile build_anisotropy(const nlohmann::json& anisotropy);

/// The lambdas a sweep command iterates over.
std::vector<double> sweep_points(const ExperimentConfig& cfg);

}  // namespace spinpulse::cli
