#include "h2beta/constants.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#ifndef H2BETA_SOURCE_DIR
#define H2BETA_SOURCE_DIR "."
#endif

namespace h2beta {

using json = nlohmann::json;

CalibrationConstants CalibrationConstants::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("constants: cannot open " + path);
  json j = json::parse(in);
  CalibrationConstants c;
  c.a = j.at("a").get<double>();
  c.delta_star = j.at("delta_star").get<double>();
  c.K0 = j.at("K0").get<double>();
  c.K_laguerre = j.at("K_laguerre").get<double>();
  c.ratio_growth_min = j.value("ratio_growth_min", 1.0);
  c.provenance = j.value("_provenance", "");
  return c;
}

CalibrationConstants CalibrationConstants::load_default() { return load(resolve_path()); }

void CalibrationConstants::save(const std::string& path) const {
  json j;
  j["a"] = a;
  j["delta_star"] = delta_star;
  j["K0"] = K0;
  j["K_laguerre"] = K_laguerre;
  j["ratio_growth_min"] = ratio_growth_min;
  j["_provenance"] = provenance;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("constants: cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string CalibrationConstants::resolve_path() {
  if (const char* env = std::getenv("H2BETA_CONSTANTS")) return env;
  {
    std::ifstream probe("constants/calibration.json");
    if (probe) return "constants/calibration.json";
  }
  return std::string(H2BETA_SOURCE_DIR) + "/constants/calibration.json";
}

}  // namespace h2beta
