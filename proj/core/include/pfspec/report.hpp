// Result emission: the fixed-schema scan CSV, JSON mirrors, and the
// optional SVG level diagram.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pfspec/spectral_scan.hpp"

namespace pfspec {

inline constexpr const char* kScanCsvHeader =
    "sigma,E_g,gap,cluster1,cluster2,n_ph,dE_over_g2,overlap,holds";

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);

std::string splitting_report_json(const SplittingReport& report);
std::string scan_json(const std::vector<ScanRow>& rows);
std::string spectrum_json(const SpectrumResult& spectrum, double g, double p3,
                          const CutoffWindow& window, double n_ph, double overlap);

// level diagram: eigenvalue offsets (lambda_i - E_g)/g^2 per scan row
void write_levels_svg(std::ostream& os, const std::vector<ScanRow>& rows,
                      const std::vector<Eigen::VectorXd>& level_sets);

}  // namespace pfspec
