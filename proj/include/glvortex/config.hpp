#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "glvortex/boundary.hpp"
#include "glvortex/gl_solver.hpp"
#include "glvortex/harmonic.hpp"

namespace glvortex {

// Run description read from a JSON document whose keys are dotted paths:
//
//   {
//     "grid.n_cells": 128,
//     "problem.n": 2,
//     "problem.components": [{"degree": 1}, {"degree": 0, "psi": [[1, 0.3, 0.0]], "offset": 1.0}],
//     "sweep.eps_schedule": [0.2, 0.1, 0.05, 0.025]
//   }
//
// Nested objects are accepted too and read as the equivalent dotted keys.
// Unknown keys are rejected.
struct RunConfig {
  int n_cells = 0;
  BoundaryConfig boundary;
  std::vector<std::vector<std::array<double, 2>>> vortex_points;  // per component, may be empty
  SolveConfig solve;
  std::string init = "multistart";  // multistart, harmonic, vortex_product or random
  BetaConfig beta;
  std::vector<double> eps_schedule;
  double margin = 0.1;
  bool trace = false;
  std::string output_dir = "runs";
  std::vector<std::string> warnings;  // e.g. eps below 2h
};

// Throws ConfigError naming the offending key path.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

// The configuration with every default filled in, as pretty-printed JSON.
std::string resolved_json(const RunConfig& config);

}  // namespace glvortex
