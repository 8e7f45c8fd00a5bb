#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

// Binary raster files, little-endian throughout:
//
//   magic      4 bytes   "PFLD" (complex field) or "PRAS" (real raster)
//   version    u16
//   nx, ny     u32, u32
//   lx, ly, z  f64, f64, f64
//   payload    nx*ny row-major cells (x fastest):
//                PFLD: interleaved (re, im) f64 pairs
//                PRAS: one f64 per cell

namespace photonfluid::io {

inline constexpr std::uint16_t kFormatVersion = 1;

struct RasterHeader {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  double lx = 0.0;
  double ly = 0.0;
  double z = 0.0;
};

struct FieldFile {
  RasterHeader header;
  std::vector<std::complex<double>> data;
};

struct RealFile {
  RasterHeader header;
  std::vector<double> data;
};

void write_field(const std::filesystem::path& path, const RasterHeader& header,
                 std::span<const std::complex<double>> data);
FieldFile read_field(const std::filesystem::path& path);

void write_raster(const std::filesystem::path& path, const RasterHeader& header,
                  std::span<const double> data);
RealFile read_raster(const std::filesystem::path& path);

}  // namespace photonfluid::io
