#ifndef MHDREG_REPORT_HPP_
#define MHDREG_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mhdreg/inequality.hpp"
#include "mhdreg/monitors.hpp"

namespace mhdreg {

inline constexpr const char* kMonitorCsvHeader =
    "t,E_u,E_b,grad_u_sq,grad_b_sq,norm_uz_alpha,M_t,norm_pz_alpha,Mp_t,D_t,energy_residual,"
    "zderiv_residual,h1_residual,l4_residual,div_u_max,div_b_max";

/// One row per sample, numbers with 17 significant digits. The u_z and p_z
/// columns follow the first velocity_z and pressure_z specs (0 without one);
/// the identity residual columns are 0 for series shorter than three samples.
std::string monitor_csv(const MonitorSeries& series);
void emit_monitor_csv(const MonitorSeries& series, const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Throws IoError on unreadable files or malformed numbers.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

struct InequalityRun {
  InequalityCase which;
  TestFamily family = TestFamily::anisotropic_gaussian;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  int grid_n = 32;
  double box_length = kTwoPi;
  EmpiricalConstant result;
};

/// JSON document with params, trials, sup_ratio, argmax spec, seed and grid
/// for every run.
std::string inequality_report_json(const std::vector<InequalityRun>& runs);
void emit_report_json(const std::vector<InequalityRun>& runs, const std::filesystem::path& path);

/// Writes to a sibling temporary and renames over `path`. Throws IoError.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace mhdreg

#endif  // MHDREG_REPORT_HPP_
