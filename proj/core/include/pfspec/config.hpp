// JSON run configuration.  One document drives every subcommand; all fields
// have defaults (units: hbar = c = 1, masses in multiples of the electron
// mass).  See the README for the schema.

#pragma once

#include <cstddef>
#include <string>

#include "pfspec/spectral_scan.hpp"

namespace pfspec {

struct GridParams {
  int n_radial = 1;
  int n_polar = 2;
};

struct InternalParams {
  int n_int = 2;
  int sternheimer_points = 6000;
  double sternheimer_rmax = 40.0;  // in units of 1/mu
};

struct ScanParams {
  double beta_c1 = 6.4e-3;
  double kappa = 0.5;
  int steps = 4;
  double eta = 0.0;    // 0: delta_lower_bound(p_c) * beta_c1
  double sigma0 = 0.0; // 0: g^2 / beta_c1
  bool snap_dyadic = true;
};

struct OutputParams {
  std::string dir = "out";
  bool svg = false;
};

struct Config {
  Masses masses;
  double g = 1e-2;
  double p3 = 0.0;
  double lambda_uv = 1.0;
  double sigma = 0.1;
  double p_c = 0.5;
  GridParams grid;
  GridParams quadrature{12, 4};
  InternalParams internal;
  int n_max_photons = 2;
  SolverOptions solver;
  ScanParams scan;
  OutputParams output;
  std::size_t triplet_budget = kDefaultTripletBudget;
  int threads = 1;

  ScanSettings scan_settings() const;
};

// Parse a config document / file.  Throws std::invalid_argument with a
// descriptive message on malformed input (momenta off the 3-axis included).
Config config_from_json_text(const std::string& text);
Config config_from_file(const std::string& path);

std::string config_schema_defaults();  // the defaults, serialized

}  // namespace pfspec
