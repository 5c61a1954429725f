#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwppt/schedule.hpp"
#include "rwppt/target.hpp"

namespace rwppt {

/// Malformed or incomplete experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RegionConfig {
  RegionTemplate shape;                       // offset used when center is absent
  std::optional<std::vector<double>> center;  // explicit center, length = dimension
};

struct LadderSection {
  double beta_min = 0.1;
  Construction construction = Construction::optimal;
  std::optional<std::size_t> d;  // defaults to the model dimension
};

struct SimulateSection {
  std::optional<std::vector<double>> betas;  // otherwise built from the ladder section
  std::uint64_t n_sweeps = 0;
  std::size_t within_moves = 1;
  bool refresh_hottest = false;
};

/// Parsed experiment file. See README for the schema; unknown keys are errors.
struct ExperimentConfig {
  std::size_t dimension = 1;
  std::vector<RegionConfig> regions;
  std::optional<std::uint64_t> seed;
  std::optional<double> beta;
  std::optional<std::vector<double>> ell_grid;
  std::optional<double> ell;  // convergence spacing; absent means "optimal"
  bool ell_optimal = false;
  std::optional<std::vector<std::size_t>> d_list;
  std::uint64_t n_samples = 100000;
  std::optional<LadderSection> ladder;
  std::optional<SimulateSection> simulate;
  std::vector<double> m_grid;

  // Output file names, relative to the output directory.
  std::string theory_curve_file = "theory_curve.csv";
  std::string optimize_file = "optimize.json";
  std::string ladder_file = "ladder.csv";
  std::string simulate_file = "simulate.csv";
  std::string convergence_file = "convergence.csv";
  std::string figure_file = "figure.csv";

  /// The model at the configured dimension.
  TargetModel model() const;
  /// The model at dimension d; ConfigError if a region has an explicit center.
  TargetModel model_at(std::size_t d) const;
  std::vector<RegionTemplate> templates() const;
};

/// Parses JSON text. ConfigError on syntax errors, unknown keys or invalid models.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Subcommand bodies; each returns the full file contents.
std::string theory_curve_csv(const ExperimentConfig& config);
std::string optimize_json(const ExperimentConfig& config);
std::string ladder_csv(const ExperimentConfig& config);
std::string simulate_csv(const ExperimentConfig& config, unsigned threads = 1);
std::string convergence_csv(const ExperimentConfig& config, unsigned threads = 1);
std::string figure_csv(const ExperimentConfig& config);

/// 12 significant digits.
std::string format_theory(double value);
/// Shortest representation that round-trips.
std::string format_exact(double value);

}  // namespace rwppt
