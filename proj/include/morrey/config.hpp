#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "morrey/ball.hpp"
#include "morrey/corpus.hpp"
#include "morrey/grid.hpp"
#include "morrey/norms.hpp"
#include "morrey/operators.hpp"
#include "morrey/quadrature.hpp"

namespace morrey {

inline constexpr std::string_view kConfigSchema = "morrey.config/1";

struct TimeSpec {
  int nodes = LogTimeGrid::kDefaultNodes;
  std::optional<double> t_min;  // nullopt: chosen from the grid's symbols
  std::optional<double> t_max;
};

struct ReproduceSpec {
  int m = 1;
  int nodes = 2048;
  std::optional<double> t_min;
  std::optional<double> t_max;
  int battery = 10;
};

struct ExperimentConfig {
  int dimension = 1;
  int points = 256;
  double length = 6.283185307179586;
  std::string generator = "heat";
  MorreyParams params;
  std::optional<std::vector<double>> radii;  // nullopt: dyadic radii of the grid
  int stride = 8;
  int x_stride = 8;
  TimeSpec time;
  std::optional<std::vector<CorpusSpec>> corpus;  // nullopt: default corpus
  std::uint64_t seed = 1;
  ReproduceSpec reproduce;

  Grid grid() const { return Grid(dimension, points, length); }
  GeneratorSpec generator_spec() const { return GeneratorSpec::from_name(generator); }
  std::vector<double> ball_radii(const Grid& g) const;
  BallSet balls(const Grid& g) const;
  LogTimeGrid time_grid(const Grid& g) const;
  std::vector<CorpusSpec> corpus_specs() const;

  /// Checks every range before any computation; throws ConfigError.
  void validate() const;
};

/// Parses the JSON configuration. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON echo of a configuration (includes resolved defaults).
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace morrey
