#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "zk/dynamics.hpp"
#include "zk/error.hpp"

namespace zk::dynamics {

namespace {

constexpr std::array<char, 8> kMagic{'Z', 'K', 'S', 'N', 'A', 'P', '0', '1'};

template <class T>
void put(std::ofstream& out, T value) {
  static_assert(sizeof(T) == 8);
  std::array<char, 8> bytes;
  std::memcpy(bytes.data(), &value, 8);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), 8);
}

template <class T>
T get(std::ifstream& in) {
  static_assert(sizeof(T) == 8);
  std::array<char, 8> bytes;
  if (!in.read(bytes.data(), 8)) throw DomainError("truncated snapshot file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), 8);
  return value;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Field& field, double t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot write snapshot " + path.string());
  const Grid& g = field.grid();
  out.write(kMagic.data(), kMagic.size());
  put<std::int64_t>(out, g.nx());
  put<std::int64_t>(out, g.ny());
  put<double>(out, g.length());
  put<double>(out, g.half_width());
  put<double>(out, t);
  for (double v : field.values()) put<double>(out, v);
  if (!out) throw DomainError("error writing snapshot " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path, DomainKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open snapshot " + path.string());
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw DomainError("not a snapshot file: " + path.string());
  const auto nx = get<std::int64_t>(in);
  const auto ny = get<std::int64_t>(in);
  const double L = get<double>(in);
  const double B = get<double>(in);
  const double t = get<double>(in);
  if (nx < geometry::kMinInteriorPoints || ny < geometry::kMinInteriorPoints || nx > (1 << 20) ||
      ny > (1 << 20))
    throw DomainError("snapshot header has invalid sizes");
  Grid grid(L, B, static_cast<int>(nx), static_cast<int>(ny), kind);
  std::vector<double> values(grid.node_count());
  for (double& v : values) v = get<double>(in);
  Field field(grid, std::move(values));
  bool clean = true;
  for (int i = 0; i <= grid.nx() + 1 && clean; ++i)
    clean = field(i, 0) == 0.0 && field(i, grid.ny() + 1) == 0.0;
  for (int j = 0; j <= grid.ny() + 1 && clean; ++j)
    clean = field(0, j) == 0.0 && field(grid.nx() + 1, j) == 0.0;
  if (clean) field.assume_clean();
  return {t, std::move(field)};
}

}  // namespace zk::dynamics
