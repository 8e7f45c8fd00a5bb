#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

// Minimal raster plotting to binary PPM. No text: axes are the frame and the
// zero lines; the CSVs carry the numbers.

namespace photonfluid::cli::plot {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kGrey{160, 160, 160};
inline constexpr Rgb kShade{255, 228, 196};
inline constexpr Rgb kRed{200, 30, 30};
inline constexpr Rgb kBlue{30, 60, 200};
inline constexpr Rgb kGreen{20, 140, 60};

class Canvas {
 public:
  Canvas(int width, int height, Rgb background = kWhite);
  void set(int x, int y, Rgb c);
  void line(double x0, double y0, double x1, double y1, Rgb c);
  void fill(int x0, int y0, int x1, int y1, Rgb c);
  void write_ppm(const std::filesystem::path& path) const;
  int width() const { return w_; }
  int height() const { return h_; }

 private:
  int w_, h_;
  std::vector<std::uint8_t> px_;
};

struct Panel {
  int left, top, width, height;
  double xmin, xmax, ymin, ymax;

  double px(double x) const { return left + (x - xmin) / (xmax - xmin) * (width - 1); }
  double py(double y) const { return top + (ymax - y) / (ymax - ymin) * (height - 1); }

  void frame(Canvas& c) const;
  void shade_x(Canvas& c, double x0, double x1, Rgb colour) const;
  void hline(Canvas& c, double y, Rgb colour) const;
  /// Polyline through (xs[i], ys[i]); non-finite values break the line.
  void series(Canvas& c, std::span<const double> xs, std::span<const double> ys, Rgb colour) const;
  void dots(Canvas& c, std::span<const double> xs, std::span<const double> ys, Rgb colour) const;
};

/// Blue-white-red scale for t in [0, 1].
Rgb colour_scale(double t);

}  // namespace photonfluid::cli::plot
