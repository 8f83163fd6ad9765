#include "pfspec/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace pfspec {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json window_json(const CutoffWindow& w) {
  return {{"sigma_low", w.sigma_low}, {"sigma_high", w.sigma_high}};
}

json splitting_json_object(const SplittingReport& r) {
  json j;
  j["gamma0"] = r.gamma0;
  j["gamma1"] = r.gamma1;
  j["gamma2"] = r.gamma2;
  j["gamma3"] = r.gamma3;
  j["delta_sigma"] = r.delta_sigma;
  j["d_diag"] = r.d_diag;
  j["e0_pred"] = r.e0_pred;
  j["window"] = window_json(r.window);
  j["masses"] = {{"m_el", r.masses.m_el}, {"m_n", r.masses.m_n}};
  j["P"] = {0.0, 0.0, r.p3};
  j["g"] = r.g;
  j["gamma_matrix_ratio"] = r.gamma_matrix_ratio;
  return j;
}

}  // namespace

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << kScanCsvHeader << "\n";
  for (const ScanRow& r : rows)
    os << num(r.sigma) << "," << num(r.e_g) << "," << num(r.gap) << "," << r.cluster1 << ","
       << r.cluster2 << "," << num(r.n_ph) << "," << num(r.de_over_g2) << "," << num(r.overlap)
       << "," << (r.holds ? 1 : 0) << "\n";
}

std::string splitting_report_json(const SplittingReport& report) {
  return splitting_json_object(report).dump(2);
}

std::string scan_json(const std::vector<ScanRow>& rows) {
  json arr = json::array();
  for (const ScanRow& r : rows) {
    json j;
    j["step"] = r.step;
    j["sigma"] = r.sigma;
    j["E_g"] = r.e_g;
    j["gap"] = r.gap;
    j["cluster1"] = r.cluster1;
    j["cluster2"] = r.cluster2;
    j["n_ph"] = r.n_ph;
    j["dE_over_g2"] = r.de_over_g2;
    j["overlap"] = r.overlap;
    j["holds"] = r.holds;
    j["simple"] = r.simple;
    j["eta"] = r.eta;
    j["shell_n_ph"] = r.shell_n_ph;
    j["E_monotonicity_residual"] = r.e_monotonicity_residual;
    j["C_shell_fit"] = r.c_shell_fit;
    if (!r.error.empty()) j["error"] = r.error;
    j["splitting"] = splitting_json_object(r.splitting);
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

std::string spectrum_json(const SpectrumResult& spectrum, double g, double p3,
                          const CutoffWindow& window, double n_ph, double overlap) {
  json j;
  j["g"] = g;
  j["P"] = {0.0, 0.0, p3};
  j["window"] = window_json(window);
  j["eigenvalues"] = std::vector<double>(
      spectrum.eigenvalues.data(), spectrum.eigenvalues.data() + spectrum.eigenvalues.size());
  j["residuals"] = std::vector<double>(spectrum.residuals.data(),
                                       spectrum.residuals.data() + spectrum.residuals.size());
  j["cluster_sizes"] = spectrum.cluster_sizes;
  j["cluster_tolerance"] = spectrum.cluster_tolerance;
  j["gap"] = spectrum.gap;
  j["n_ph"] = n_ph;
  j["overlap"] = overlap;
  j["iterations"] = spectrum.iterations;
  return j.dump(2);
}

void write_levels_svg(std::ostream& os, const std::vector<ScanRow>& rows,
                      const std::vector<Eigen::VectorXd>& level_sets) {
  const int width = 720, height = 420, margin = 60;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (rows.empty() || level_sets.size() != rows.size()) {
    os << "</svg>\n";
    return;
  }

  double ymax = 0.0;
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const double g2 = rows[n].splitting.g * rows[n].splitting.g;
    if (g2 == 0.0) continue;
    const double top = (level_sets[n].maxCoeff() - rows[n].e_g) / g2;
    ymax = std::max(ymax, top);
  }
  if (ymax <= 0.0) ymax = 1.0;

  const double x0 = margin, x1 = width - margin, y0 = height - margin, y1 = margin;
  const auto xpos = [&](std::size_t n) {
    return rows.size() == 1 ? 0.5 * (x0 + x1)
                            : x0 + (x1 - x0) * static_cast<double>(n) / (rows.size() - 1);
  };
  const auto ypos = [&](double offset) { return y0 - (y0 - y1) * offset / ymax; };

  os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << 0.5 * (x0 + x1) << "\" y=\"" << height - 16
     << "\" text-anchor=\"middle\" font-size=\"13\">infrared cutoff sigma (level offsets in units "
        "of g^2)</text>\n";

  for (std::size_t n = 0; n < rows.size(); ++n) {
    const double x = xpos(n);
    const double g2 = rows[n].splitting.g * rows[n].splitting.g;
    os << "<text x=\"" << x << "\" y=\"" << y0 + 18
       << "\" text-anchor=\"middle\" font-size=\"11\">" << rows[n].sigma << "</text>\n";
    for (Eigen::Index i = 0; i < level_sets[n].size(); ++i) {
      const double offset = g2 > 0.0 ? (level_sets[n](i) - rows[n].e_g) / g2 : 0.0;
      const double y = ypos(offset);
      os << "<line x1=\"" << x - 14 << "\" y1=\"" << y << "\" x2=\"" << x + 14 << "\" y2=\"" << y
         << "\" stroke=\"" << (i == 0 ? "crimson" : "steelblue") << "\" stroke-width=\"2\"/>\n";
    }
  }
  os << "</svg>\n";
}

}  // namespace pfspec
