#pragma once

#include <string>

namespace h2beta {

// Calibrated constants consumed by the lemma-scan, stationary-phase and
// Laguerre checks. Produced once by `h2beta calibrate` and frozen in
// constants/calibration.json; the environment variable H2BETA_CONSTANTS
// overrides the path.
struct CalibrationConstants {
  double a = 0.5;            // Mobius parameter the calibration ran at
  double delta_star = 0.0;   // E-set threshold/density level (lemma scan)
  double K0 = 0.0;           // stationary-phase budget constant
  double K_laguerre = 0.0;   // Laguerre remainder constant
  double ratio_growth_min = 0.0;  // column-ratio growth floor, n=121 -> 721
  std::string provenance;

  static CalibrationConstants load(const std::string& path);
  static CalibrationConstants load_default();
  void save(const std::string& path) const;

  /// H2BETA_CONSTANTS env var, else ./constants/calibration.json, else the
  /// copy shipped in the source tree.
  static std::string resolve_path();
};

}  // namespace h2beta
