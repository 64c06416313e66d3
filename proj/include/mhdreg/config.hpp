#ifndef MHDREG_CONFIG_HPP_
#define MHDREG_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mhdreg/dynamics.hpp"
#include "mhdreg/monitors.hpp"

namespace mhdreg {

/// Settings for `simulate`. Read from `key = value` lines; `#` starts a
/// comment. Keys:
///   grid_n, box_length, dt, t_end, nu, eta, dealias (true/false), form,
///   init, init_amplitude, init_epsilon, init_kmax, init_energy,
///   init_checkpoint, seed, criteria (comma-separated kind:alpha:beta),
///   sample_every, checkpoint_every, out_dir
struct RunConfig {
  int grid_n = 32;
  double box_length = kTwoPi;
  SolverConfig solver{};
  InitKind init = InitKind::taylor_green;
  InitParams init_params{};
  std::uint64_t seed = 0;
  std::vector<CriterionSpec> criteria;
  int sample_every = 1;
  int checkpoint_every = 0;
  std::string out_dir = "out";

  [[nodiscard]] Grid grid() const { return Grid(grid_n, box_length); }
};

/// Throws ConfigError naming the offending key.
RunConfig parse_run_config(std::string_view text);
/// Throws IoError if the file cannot be read.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace mhdreg

#endif  // MHDREG_CONFIG_HPP_
