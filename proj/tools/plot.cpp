#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "photonfluid/error.hpp"

namespace photonfluid::cli::plot {

Canvas::Canvas(int width, int height, Rgb background) : w_(width), h_(height), px_(3 * width * height) {
  for (std::size_t i = 0; i < px_.size(); i += 3) std::copy(background.begin(), background.end(), px_.begin() + i);
}

void Canvas::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
  std::copy(c.begin(), c.end(), px_.begin() + 3 * (y * w_ + x));
}

void Canvas::line(double x0, double y0, double x1, double y1, Rgb c) {
  const int n = static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))) + 1;
  if (n > 100000) return;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    set(static_cast<int>(std::lround(x0 + t * (x1 - x0))), static_cast<int>(std::lround(y0 + t * (y1 - y0))), c);
  }
}

void Canvas::fill(int x0, int y0, int x1, int y1, Rgb c) {
  for (int y = std::max(0, y0); y < std::min(h_, y1); ++y)
    for (int x = std::max(0, x0); x < std::min(w_, x1); ++x) set(x, y, c);
}

void Canvas::write_ppm(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  out << "P6\n" << w_ << " " << h_ << "\n255\n";
  out.write(reinterpret_cast<const char*>(px_.data()), static_cast<std::streamsize>(px_.size()));
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
}

void Panel::frame(Canvas& c) const {
  const int r = left + width - 1, b = top + height - 1;
  c.line(left, top, r, top, kBlack);
  c.line(left, b, r, b, kBlack);
  c.line(left, top, left, b, kBlack);
  c.line(r, top, r, b, kBlack);
}

void Panel::shade_x(Canvas& c, double x0, double x1, Rgb colour) const {
  x0 = std::clamp(x0, xmin, xmax);
  x1 = std::clamp(x1, xmin, xmax);
  if (!(x1 > x0)) return;
  c.fill(static_cast<int>(px(x0)), top, static_cast<int>(px(x1)) + 1, top + height, colour);
}

void Panel::hline(Canvas& c, double y, Rgb colour) const {
  if (y < ymin || y > ymax) return;
  c.line(left, py(y), left + width - 1, py(y), colour);
}

void Panel::series(Canvas& c, std::span<const double> xs, std::span<const double> ys, Rgb colour) const {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!std::isfinite(ys[i - 1]) || !std::isfinite(ys[i])) continue;
    const auto clip = [&](double y) { return std::clamp(y, ymin, ymax); };
    if ((ys[i - 1] < ymin && ys[i] < ymin) || (ys[i - 1] > ymax && ys[i] > ymax)) continue;
    c.line(px(xs[i - 1]), py(clip(ys[i - 1])), px(xs[i]), py(clip(ys[i])), colour);
  }
}

void Panel::dots(Canvas& c, std::span<const double> xs, std::span<const double> ys, Rgb colour) const {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(ys[i]) || ys[i] < ymin || ys[i] > ymax) continue;
    const int x = static_cast<int>(std::lround(px(xs[i]))), y = static_cast<int>(std::lround(py(ys[i])));
    c.fill(x - 1, y - 1, x + 2, y + 2, colour);
  }
}

Rgb colour_scale(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const auto mix = [](double a, double b, double s) { return static_cast<std::uint8_t>(std::lround(a + (b - a) * s)); };
  if (t < 0.5) {
    const double s = t / 0.5;
    return {mix(30, 255, s), mix(60, 255, s), mix(200, 255, s)};
  }
  const double s = (t - 0.5) / 0.5;
  return {mix(255, 200, s), mix(255, 30, s), mix(255, 30, s)};
}

}  // namespace photonfluid::cli::plot
