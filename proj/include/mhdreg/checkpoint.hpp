#ifndef MHDREG_CHECKPOINT_HPP_
#define MHDREG_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>

#include "mhdreg/state.hpp"

namespace mhdreg {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary checkpoint, little-endian throughout:
///   bytes 0-3  magic "MHDC"
///   u32        version (1)
///   u32 x 3    nx, ny, nz
///   f64 x 4    L, t, nu, eta
///   f64 arrays u1, u2, u3, b1, b2, b3, each nx*ny*nz values, z fastest
struct Checkpoint {
  State state;
  double nu = 1.0;
  double eta = 1.0;
};

/// Writes to a temporary file beside `path` and renames it into place.
/// Throws IoError with the path on failure.
void write_checkpoint(const State& state, double nu, double eta, const std::filesystem::path& path);

/// Throws BadMagic, UnsupportedVersion, TruncatedFile, IoError, or
/// GridMismatch when `expected` is given and differs from the stored grid.
Checkpoint read_checkpoint(const std::filesystem::path& path,
                           const std::optional<Grid>& expected = std::nullopt);

}  // namespace mhdreg

#endif  // MHDREG_CHECKPOINT_HPP_
