#include "pfspec/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pfspec {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

void read_momentum(const json& j, Config& config) {
  if (j.contains("P3")) config.p3 = j.at("P3").get<double>();
  if (j.contains("P")) {
    const auto p = j.at("P").get<std::vector<double>>();
    if (p.size() != 3) throw std::invalid_argument("config: P must have three components");
    if (p[0] != 0.0 || p[1] != 0.0)
      throw std::invalid_argument(
          "config: total momentum must point along the 3-axis (P = [0, 0, P3])");
    config.p3 = p[2];
  }
}

}  // namespace

ScanSettings Config::scan_settings() const {
  ScanSettings s;
  s.masses = masses;
  s.g = g;
  s.p3 = p3;
  s.lambda_uv = lambda_uv;
  s.beta_c1 = scan.beta_c1;
  s.sigma0 = scan.sigma0;
  s.kappa = scan.kappa;
  s.steps = scan.steps;
  s.eta = scan.eta;
  s.p_c = p_c;
  s.snap_dyadic = scan.snap_dyadic;
  s.grid_radial = grid.n_radial;
  s.grid_polar = grid.n_polar;
  s.n_int = internal.n_int;
  s.n_max_photons = n_max_photons;
  s.solver = solver;
  s.triplet_budget = triplet_budget;
  s.threads = threads;
  return s;
}

Config config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + err.what());
  }

  Config config;
  try {
    if (j.contains("masses")) {
      read(j["masses"], "m_el", config.masses.m_el);
      read(j["masses"], "m_n", config.masses.m_n);
    }
    read(j, "g", config.g);
    read_momentum(j, config);
    read(j, "Lambda", config.lambda_uv);
    read(j, "sigma", config.sigma);
    read(j, "p_c", config.p_c);
    if (j.contains("grid")) {
      read(j["grid"], "n_radial", config.grid.n_radial);
      read(j["grid"], "n_polar", config.grid.n_polar);
    }
    if (j.contains("quadrature")) {
      read(j["quadrature"], "n_radial", config.quadrature.n_radial);
      read(j["quadrature"], "n_polar", config.quadrature.n_polar);
    }
    if (j.contains("internal")) {
      read(j["internal"], "n_int", config.internal.n_int);
      read(j["internal"], "sternheimer_points", config.internal.sternheimer_points);
      read(j["internal"], "sternheimer_rmax", config.internal.sternheimer_rmax);
    }
    if (j.contains("fock")) read(j["fock"], "n_max_photons", config.n_max_photons);
    if (j.contains("solver")) {
      const json& s = j["solver"];
      read(s, "tolerance", config.solver.tolerance);
      read(s, "max_iterations", config.solver.max_iterations);
      read(s, "n_pairs", config.solver.n_pairs);
      read(s, "dense_threshold", config.solver.dense_threshold);
      read(s, "force_dense", config.solver.force_dense);
      read(s, "seed", config.solver.seed);
    }
    if (j.contains("scan")) {
      const json& s = j["scan"];
      read(s, "beta_c1", config.scan.beta_c1);
      read(s, "kappa", config.scan.kappa);
      read(s, "steps", config.scan.steps);
      read(s, "eta", config.scan.eta);
      read(s, "sigma0", config.scan.sigma0);
      read(s, "snap_dyadic", config.scan.snap_dyadic);
    }
    if (j.contains("output")) {
      read(j["output"], "dir", config.output.dir);
      read(j["output"], "svg", config.output.svg);
    }
    if (j.contains("assembly")) read(j["assembly"], "triplet_budget", config.triplet_budget);
    read(j, "threads", config.threads);
  } catch (const json::exception& err) {
    throw std::invalid_argument(std::string("config: ") + err.what());
  }

  if (config.masses.m_el <= 0.0 || config.masses.m_n <= 0.0)
    throw std::invalid_argument("config: masses must be positive");
  if (config.lambda_uv <= 0.0) throw std::invalid_argument("config: Lambda must be positive");
  if (config.sigma < 0.0 || config.sigma > config.lambda_uv)
    throw std::invalid_argument("config: need 0 <= sigma <= Lambda");
  if (!(config.scan.kappa > 0.0 && config.scan.kappa < 1.0))
    throw std::invalid_argument("config: scan.kappa must lie in (0,1)");
  return config;
}

Config config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

std::string config_schema_defaults() {
  const Config c;
  json j;
  j["masses"] = {{"m_el", c.masses.m_el}, {"m_n", c.masses.m_n}};
  j["g"] = c.g;
  j["P"] = {0.0, 0.0, c.p3};
  j["Lambda"] = c.lambda_uv;
  j["sigma"] = c.sigma;
  j["p_c"] = c.p_c;
  j["grid"] = {{"n_radial", c.grid.n_radial}, {"n_polar", c.grid.n_polar}};
  j["quadrature"] = {{"n_radial", c.quadrature.n_radial}, {"n_polar", c.quadrature.n_polar}};
  j["internal"] = {{"n_int", c.internal.n_int},
                   {"sternheimer_points", c.internal.sternheimer_points},
                   {"sternheimer_rmax", c.internal.sternheimer_rmax}};
  j["fock"] = {{"n_max_photons", c.n_max_photons}};
  j["solver"] = {{"tolerance", c.solver.tolerance},
                 {"max_iterations", c.solver.max_iterations},
                 {"n_pairs", c.solver.n_pairs},
                 {"dense_threshold", c.solver.dense_threshold},
                 {"force_dense", c.solver.force_dense},
                 {"seed", c.solver.seed}};
  j["scan"] = {{"beta_c1", c.scan.beta_c1}, {"kappa", c.scan.kappa},   {"steps", c.scan.steps},
               {"eta", c.scan.eta},         {"sigma0", c.scan.sigma0}, {"snap_dyadic", c.scan.snap_dyadic}};
  j["output"] = {{"dir", c.output.dir}, {"svg", c.output.svg}};
  j["assembly"] = {{"triplet_budget", c.triplet_budget}};
  j["threads"] = c.threads;
  return j.dump(2);
}

}  // namespace pfspec
