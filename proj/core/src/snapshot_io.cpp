#include "erds/snapshot_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "erds/errors.hpp"

namespace erds {

namespace {

void put_f64(std::ostream& os, double v) {
  std::array<char, 8> bytes;
  std::memcpy(bytes.data(), &v, 8);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  os.write(bytes.data(), 8);
}

double get_f64(std::istream& is) {
  std::array<char, 8> bytes;
  if (!is.read(bytes.data(), 8)) throw Error("snapshot truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  double v;
  std::memcpy(&v, bytes.data(), 8);
  return v;
}

int get_integral(std::istream& is, const char* what) {
  const double v = get_f64(is);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1 << 20) throw Error(std::string("snapshot: bad ") + what);
  return static_cast<int>(v);
}

}  // namespace

void write_field_snapshot(std::ostream& os, const Field& field, double time) {
  os.write(kSnapshotMagic.data(), static_cast<std::streamsize>(kSnapshotMagic.size()));
  const Grid& g = field.grid();
  put_f64(os, g.dim());
  put_f64(os, g.n());
  put_f64(os, g.length());
  put_f64(os, time);
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(field.values().data()),
             static_cast<std::streamsize>(field.size() * sizeof(double)));
  } else {
    for (double v : field.values()) put_f64(os, v);
  }
  if (!os) throw Error("failed to write field snapshot");
}

TimedField read_field_snapshot(std::istream& is) {
  std::array<char, kSnapshotMagic.size()> magic;
  if (!is.read(magic.data(), static_cast<std::streamsize>(magic.size())) ||
      std::string_view(magic.data(), magic.size()) != kSnapshotMagic)
    throw Error("not a field snapshot (bad magic)");
  const int dim = get_integral(is, "dim");
  const int n = get_integral(is, "n");
  const double length = get_f64(is);
  const double time = get_f64(is);
  Grid grid(dim, n, length);
  std::vector<double> values(grid.size());
  if constexpr (std::endian::native == std::endian::little) {
    if (!is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double))))
      throw Error("snapshot truncated");
  } else {
    for (double& v : values) v = get_f64(is);
  }
  return {time, Field(grid, std::move(values))};
}

void write_frame_file(const std::filesystem::path& path, const SpeciesState& state) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  for (const auto& f : state.species) write_field_snapshot(os, f, state.time);
}

SpeciesState read_frame_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  SpeciesState state;
  while (is.peek() != std::char_traits<char>::eof()) {
    auto tf = read_field_snapshot(is);
    if (!state.species.empty() && tf.time != state.time) throw Error("frame file mixes snapshot times");
    state.time = tf.time;
    state.species.push_back(std::move(tf.field));
  }
  if (state.species.empty()) throw Error("empty frame file " + path.string());
  return state;
}

}  // namespace erds
