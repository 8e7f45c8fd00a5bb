#include "photonfluid/snapshot_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <string_view>

#include <fmt/format.h>

#include "photonfluid/error.hpp"

namespace photonfluid::io {

namespace {

constexpr std::string_view kFieldMagic = "PFLD";
constexpr std::string_view kRasterMagic = "PRAS";

class LeWriter {
 public:
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  const std::vector<char>& bytes() const { return bytes_; }
  void reserve(std::size_t n) { bytes_.reserve(n); }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  std::vector<char> bytes_;
};

class LeReader {
 public:
  LeReader(std::vector<char> bytes, const std::filesystem::path& path)
      : bytes_(std::move(bytes)), path_(path) {}

  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::string_view raw(std::size_t n) {
    need(n);
    std::string_view s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size())
      throw IoError(fmt::format("{}: truncated file", path_.string()));
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::vector<char> bytes_;
  std::filesystem::path path_;
  std::size_t pos_ = 0;
};

void write_header(LeWriter& w, std::string_view magic, const RasterHeader& h) {
  w.raw(magic);
  w.u16(kFormatVersion);
  w.u32(h.nx);
  w.u32(h.ny);
  w.f64(h.lx);
  w.f64(h.ly);
  w.f64(h.z);
}

RasterHeader read_header(LeReader& r, std::string_view magic, const std::filesystem::path& path) {
  if (r.raw(4) != magic)
    throw IoError(fmt::format("{}: bad magic, expected {}", path.string(), magic));
  const auto version = r.u16();
  if (version != kFormatVersion)
    throw IoError(fmt::format("{}: unsupported format version {}", path.string(), version));
  RasterHeader h;
  h.nx = r.u32();
  h.ny = r.u32();
  h.lx = r.f64();
  h.ly = r.f64();
  h.z = r.f64();
  return h;
}

void flush(const std::filesystem::path& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void check_size(const RasterHeader& h, std::size_t n) {
  if (static_cast<std::size_t>(h.nx) * h.ny != n)
    throw InvalidArgument(fmt::format("payload of {} cells does not match {} x {}", n, h.nx, h.ny));
}

}  // namespace

void write_field(const std::filesystem::path& path, const RasterHeader& header,
                 std::span<const std::complex<double>> data) {
  check_size(header, data.size());
  LeWriter w;
  w.reserve(36 + 16 * data.size());
  write_header(w, kFieldMagic, header);
  for (const auto& c : data) {
    w.f64(c.real());
    w.f64(c.imag());
  }
  flush(path, w.bytes());
}

FieldFile read_field(const std::filesystem::path& path) {
  LeReader r(slurp(path), path);
  FieldFile f;
  f.header = read_header(r, kFieldMagic, path);
  const std::size_t n = static_cast<std::size_t>(f.header.nx) * f.header.ny;
  if (r.remaining() != 16 * n)
    throw IoError(fmt::format("{}: payload size {} != {}", path.string(), r.remaining(), 16 * n));
  f.data.resize(n);
  for (auto& c : f.data) {
    const double re = r.f64();
    const double im = r.f64();
    c = {re, im};
  }
  return f;
}

void write_raster(const std::filesystem::path& path, const RasterHeader& header,
                  std::span<const double> data) {
  check_size(header, data.size());
  LeWriter w;
  w.reserve(36 + 8 * data.size());
  write_header(w, kRasterMagic, header);
  for (double v : data) w.f64(v);
  flush(path, w.bytes());
}

RealFile read_raster(const std::filesystem::path& path) {
  LeReader r(slurp(path), path);
  RealFile f;
  f.header = read_header(r, kRasterMagic, path);
  const std::size_t n = static_cast<std::size_t>(f.header.nx) * f.header.ny;
  if (r.remaining() != 8 * n)
    throw IoError(fmt::format("{}: payload size {} != {}", path.string(), r.remaining(), 8 * n));
  f.data.resize(n);
  for (auto& v : f.data) v = r.f64();
  return f;
}

}  // namespace photonfluid::io
