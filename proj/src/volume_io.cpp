#include "octmc/volume_io.hpp"

#include <array>
#include <bit>
#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace octmc {
namespace {

constexpr std::array<char, 8> kMagic{'O', 'C', 'T', 'B', '5', 'V', '0', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
    throw std::runtime_error("read_volume: truncated header");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_volume(std::ostream& out, const LabeledVolume& v) {
  const ScanGeometry& g = v.geometry;
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.n_bscans));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.n_ascans));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.n_depth));
  put_le<std::uint32_t>(out, 0);
  put_le<std::uint64_t>(out, v.id);
  put_le<double>(out, g.scan_width_mm);
  put_le<double>(out, g.scan_breadth_mm);
  put_le<double>(out, g.depth_range_mm);
  put_le<double>(out, v.t_start_s);
  put_le<double>(out, v.t_end_s);
  for (std::size_t b = 0; b < g.n_bscans; ++b) {
    put_le<double>(out, b < v.bscan_times_s.size() ? v.bscan_times_s[b] : 0.0);
  }
  out.write(reinterpret_cast<const char*>(v.labels.data()), static_cast<std::streamsize>(v.labels.size()));
  if (!out) throw std::runtime_error("write_volume: stream error");
}

LabeledVolume read_volume(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("read_volume: bad magic");
  }
  ScanGeometry g;
  g.n_bscans = get_le<std::uint32_t>(in);
  g.n_ascans = get_le<std::uint32_t>(in);
  g.n_depth = get_le<std::uint32_t>(in);
  (void)get_le<std::uint32_t>(in);
  LabeledVolume v;
  v.id = get_le<std::uint64_t>(in);
  g.scan_width_mm = get_le<double>(in);
  g.scan_breadth_mm = get_le<double>(in);
  g.depth_range_mm = get_le<double>(in);
  v.t_start_s = get_le<double>(in);
  v.t_end_s = get_le<double>(in);
  v.geometry = g;
  v.bscan_times_s.resize(g.n_bscans);
  for (auto& t : v.bscan_times_s) t = get_le<double>(in);
  v.labels.resize(g.voxel_count());
  if (!in.read(reinterpret_cast<char*>(v.labels.data()), static_cast<std::streamsize>(v.labels.size()))) {
    throw std::runtime_error("read_volume: truncated label data");
  }
  return v;
}

void write_volume_file(const std::filesystem::path& path, const LabeledVolume& volume) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_volume(out, volume);
}

LabeledVolume read_volume_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_volume(in);
}

}  // namespace octmc
