#include "mhdreg/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "mhdreg/errors.hpp"

namespace mhdreg {
namespace {

constexpr char kMagic[4] = {'M', 'H', 'D', 'C'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 3 * 4 + 4 * 8;

template <typename T>
void put(std::vector<unsigned char>& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

template <typename T>
T get(const std::vector<unsigned char>& in, std::size_t& pos) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_checkpoint(const State& state, double nu, double eta, const std::filesystem::path& path) {
  const Grid& g = state.grid();
  require_same_grid(g, state.b.grid(), "write_checkpoint");
  std::vector<unsigned char> buf;
  buf.reserve(kHeaderBytes + 6 * g.size() * sizeof(double));
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put<std::uint32_t>(buf, kCheckpointVersion);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nx()));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.ny()));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nz()));
  put<double>(buf, g.length());
  put<double>(buf, state.t);
  put<double>(buf, nu);
  put<double>(buf, eta);
  for (const VectorField* v : {&state.u, &state.b}) {
    for (int c = 0; c < 3; ++c) {
      for (double x : (*v)[c].values()) put<double>(buf, x);
    }
  }

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename checkpoint into " + path.string());
  }
}

Checkpoint read_checkpoint(const std::filesystem::path& path, const std::optional<Grid>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());

  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw BadMagic(path.string() + ": not a checkpoint file");
  }
  if (buf.size() < 8) throw TruncatedFile(path.string() + ": header truncated");
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(buf, pos);
  if (version != kCheckpointVersion) {
    throw UnsupportedVersion(path.string() + ": version " + std::to_string(version));
  }
  if (buf.size() < kHeaderBytes) throw TruncatedFile(path.string() + ": header truncated");
  std::array<int, 3> n{};
  for (int& ni : n) ni = static_cast<int>(get<std::uint32_t>(buf, pos));
  const double length = get<double>(buf, pos);
  const double t = get<double>(buf, pos);
  const double nu = get<double>(buf, pos);
  const double eta = get<double>(buf, pos);

  Grid grid(n, length);
  if (expected && !(*expected == grid)) {
    throw GridMismatch(path.string() + ": checkpoint grid differs from the requested grid");
  }
  const std::size_t payload = 6 * grid.size() * sizeof(double);
  if (buf.size() < kHeaderBytes + payload) {
    throw TruncatedFile(path.string() + ": expected " + std::to_string(kHeaderBytes + payload) +
                        " bytes, found " + std::to_string(buf.size()));
  }
  if (buf.size() > kHeaderBytes + payload) {
    throw TruncatedFile(path.string() + ": size mismatch, " + std::to_string(buf.size()) +
                        " bytes where " + std::to_string(kHeaderBytes + payload) + " expected");
  }
  Checkpoint cp{State{VectorField(grid), VectorField(grid), t}, nu, eta};
  for (VectorField* v : {&cp.state.u, &cp.state.b}) {
    for (int c = 0; c < 3; ++c) {
      double* d = (*v)[c].data();
      for (std::size_t i = 0; i < grid.size(); ++i) d[i] = get<double>(buf, pos);
    }
  }
  return cp;
}

}  // namespace mhdreg
