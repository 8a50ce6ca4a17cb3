#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lamos/scheduler.hpp"

namespace lamos {

/// Published reference design used in the comparison tables. Cycle counts and
/// areas are reported constants at the 256-bit configuration; ModSRAM scales
/// quadratically with bit width, the NTT designs are compared at 256 bits only.
struct BaselineModel {
  enum class Scaling { kFixed, kQuadraticIn256 };

  std::string name;
  double cycles_256 = 0.0;
  double clock_mhz = 0.0;
  double area_mm2 = 0.0;
  Scaling scaling = Scaling::kFixed;

  double cycles(std::size_t n) const {
    if (n == 0) throw std::invalid_argument("baseline: bit width must be positive");
    if (scaling == Scaling::kQuadraticIn256) {
      const double f = static_cast<double>(n) / 256.0;
      return cycles_256 * f * f;
    }
    return cycles_256;
  }

  double lat_ns(std::size_t n) const { return cycles(n) * 1000.0 / clock_mhz; }
};

/// Reported constants for the designs in the comparison table.
struct BaselineSet {
  double lamos_area_mm2 = 0.11;
  BaselineModel modsram{"ModSRAM", 767.0, 420.0, 0.053,
                        BaselineModel::Scaling::kQuadraticIn256};
  BaselineModel mentt{"MeNTT", 66049.0, 151.0, 0.36, BaselineModel::Scaling::kFixed};
  BaselineModel bpntt{"BP-NTT", 4395.0, 3800.0, 0.063, BaselineModel::Scaling::kFixed};
};

/// One line of a comparison or sweep table.
struct ReportRow {
  std::string design;
  std::size_t n = 0;
  unsigned macros = 0;      // 0 for fixed-function baselines
  double cycles = 0.0;
  double lat_ns = 0.0;
  double area_mm2 = 0.0;
  double latency_area = 0.0;  // us * mm^2
  double speedup = 0.0;       // latency relative to the reference design
};

inline double latency_area_us_mm2(double lat_ns, double area_mm2) {
  return lat_ns * 1e-3 * area_mm2;
}

inline ReportRow make_row(std::string design, std::size_t n, unsigned macros, double cycles,
                          double clock_mhz, double area_mm2) {
  ReportRow row;
  row.design = std::move(design);
  row.n = n;
  row.macros = macros;
  row.cycles = cycles;
  row.lat_ns = cycles * 1000.0 / clock_mhz;
  row.area_mm2 = area_mm2;
  row.latency_area = latency_area_us_mm2(row.lat_ns, area_mm2);
  return row;
}

}  // namespace lamos
