#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "h2beta/constants.hpp"

namespace h2beta {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full acceptance table against the frozen calibration constants.
/// Prints one pass/fail line per criterion to `out` as the runs finish.
std::vector<CriterionResult> run_all_criteria(const CalibrationConstants& cal, std::ostream& out);

/// The documented pre-build calibration: delta_star (E-set level at n = 512),
/// K0 (stationary-phase budget, x2 margin over the n = 256 grid), K_laguerre
/// (remainder fit at n = 50, x2 margin), and the measured column-ratio growth
/// floor. Logs the measurements to `out`.
CalibrationConstants calibrate(std::ostream& out);

}  // namespace h2beta
