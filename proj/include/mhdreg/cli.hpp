#ifndef MHDREG_CLI_HPP_
#define MHDREG_CLI_HPP_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mhdreg/config.hpp"
#include "mhdreg/errors.hpp"
#include "mhdreg/monitors.hpp"

namespace mhdreg {

/// The criteria a run monitors: the configured specs, then velocity_z:6:4
/// and pressure_z:4:2 for any kind not already present.
std::vector<CriterionSpec> monitored_criteria(const std::vector<CriterionSpec>& configured);

struct RunOutputs {
  MonitorSeries series;
  std::filesystem::path csv_path;
  std::filesystem::path summary_path;
  std::vector<std::filesystem::path> checkpoints;
  std::optional<BlowupDiagnostics> blowup;
  double blowup_time = 0.0;
};

/// Runs a configured trajectory and writes out_dir/monitors.csv,
/// out_dir/summary.json and out_dir/checkpoints/step_NNNNNNNN.mhdc. On
/// blow-up the partial outputs are written before BlowupDetected propagates.
RunOutputs run_simulation(const RunConfig& cfg,
                          const std::function<void(const std::string&)>& on_warning = {});

/// Summary document: final integrals, largest residuals and the
/// admissibility verdict of every monitored criterion.
std::string summary_json(const MonitorSeries& series, const std::optional<BlowupDiagnostics>& blowup = {},
                         double blowup_time = 0.0);

/// Rebuilds a monitor series from the checkpoints in `dir` (sorted by file
/// name), re-solving the pressure for each state.
MonitorSeries replay_checkpoints(const std::filesystem::path& dir, const std::vector<CriterionSpec>& specs,
                                 bool dealias = true);

/// Exit codes: 0 success, 1 usage or configuration error, 2 numerical or
/// runtime failure.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace mhdreg

#endif  // MHDREG_CLI_HPP_
