#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "commands.hpp"
#include "output.hpp"
#include "photonfluid/dispersion.hpp"
#include "photonfluid/error.hpp"
#include "plot.hpp"

namespace photonfluid::cli {

namespace {

std::vector<double> linspace(double lo, double hi, long n, const std::string& what) {
  if (n < 2) throw InvalidArgument(fmt::format("{}: need at least 2 points (got {})", what, n));
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi))
    throw InvalidArgument(fmt::format("{}: invalid range [{}, {}]", what, lo, hi));
  std::vector<double> v(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

void plot_curves(const std::filesystem::path& path, double beta, const std::vector<double>& Qs,
                 const std::array<std::vector<double>, 4>& re, const std::array<std::vector<double>, 4>& im) {
  plot::Canvas canvas(640, 720);
  const double q_max = Qs.back();
  double re_max = 1.0, im_max = 0.05;
  for (const auto& v : re)
    for (double x : v) re_max = std::max(re_max, std::abs(x));
  for (const auto& v : im)
    for (double x : v) im_max = std::max(im_max, 1.1 * std::abs(x));
  const plot::Panel top{40, 20, 580, 420, Qs.front(), q_max, -re_max, re_max};
  const plot::Panel bottom{40, 470, 580, 230, Qs.front(), q_max, -im_max, im_max};
  const auto band = dispersion::unstable_band(beta);
  for (const auto* p : {&top, &bottom}) {
    if (!band.empty()) p->shade_x(canvas, band.q_lo, band.q_hi, plot::kShade);
    p->hline(canvas, 0.0, plot::kGrey);
  }
  std::vector<double> bog_p, bog_m, stream;
  for (double Q : Qs) {
    bog_p.push_back(dispersion::bogoliubov(Q, 1.0, +1));
    bog_m.push_back(-bog_p.back());
    stream.push_back(0.5 * beta * Q);
  }
  top.series(canvas, Qs, bog_p, plot::kGrey);
  top.series(canvas, Qs, bog_m, plot::kGrey);
  top.series(canvas, Qs, stream, plot::kGreen);
  const plot::Rgb colours[4] = {plot::kBlue, plot::kBlue, plot::kRed, plot::kRed};
  for (std::size_t k = 0; k < 4; ++k) {
    top.dots(canvas, Qs, re[k], colours[k]);
    bottom.dots(canvas, Qs, im[k], colours[k]);
  }
  top.frame(canvas);
  bottom.frame(canvas);
  canvas.write_ppm(path);
}

}  // namespace

void cmd_dispersion(const Config& config, const std::filesystem::path& out) {
  const std::vector<double> betas = config.numbers("dispersion.betas");
  if (betas.empty()) throw InvalidArgument("dispersion.betas is empty");
  for (double b : betas)
    if (!(b >= 0.0) || !std::isfinite(b)) throw InvalidArgument(fmt::format("invalid Mach number {}", b));
  const std::vector<double> Qs = linspace(config.number("dispersion.q_min"), config.number("dispersion.q_max"),
                                          config.integer("dispersion.q_points"), "dispersion Q range");
  const double alignment = config.number("dispersion.alignment");
  const bool plots = config.flag("output.plots");

  RunDirectory run(out, "dispersion", config, {"dispersion", "output"});
  std::vector<std::string> columns{"Q", "beta"};
  for (int k = 1; k <= 4; ++k) columns.push_back(fmt::format("re_root_{}", k));
  for (int k = 1; k <= 4; ++k) columns.push_back(fmt::format("im_root_{}", k));
  columns.insert(columns.end(), {"growth", "unstable_branch", "pole_flags"});

  nlohmann::json bands = nlohmann::json::array();
  for (double beta : betas) {
    const std::string stem = fmt::format("dispersion_beta_{}", beta);
    CsvWriter csv(run.file(stem + ".csv"), run.digest(), columns);
    std::array<std::vector<double>, 4> re, im;
    for (double Q : Qs) {
      const auto set = dispersion::two_stream_roots({Q, beta, alignment});
      const double growth = dispersion::growth_rate({Q, beta, alignment});
      const std::size_t unstable = growth > 0.0 ? set.unstable_index() + 1 : 0;
      std::string poles;
      for (bool p : set.on_pole) poles += p ? '1' : '0';
      csv.row("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{}", Q, beta,
              set.roots[0].real(), set.roots[1].real(), set.roots[2].real(), set.roots[3].real(), set.roots[0].imag(),
              set.roots[1].imag(), set.roots[2].imag(), set.roots[3].imag(), growth, unstable, poles);
      for (std::size_t k = 0; k < 4; ++k) {
        re[k].push_back(set.roots[k].real());
        im[k].push_back(set.roots[k].imag());
      }
    }
    csv.close();
    if (plots) plot_curves(run.file(stem + ".ppm"), beta * alignment, Qs, re, im);
    const auto band = dispersion::unstable_band(beta * alignment);
    bands.push_back({{"beta", beta},
                     {"q_lo", band.q_lo},
                     {"q_hi", band.q_hi},
                     {"regime", dispersion::to_string(band.regime)}});
    fmt::print("beta={}: band ({:.6g}, {:.6g}) {}\n", beta, band.q_lo, band.q_hi, dispersion::to_string(band.regime));
  }
  run.summary()["bands"] = bands;
  run.write_manifest();
}

void cmd_stability_map(const Config& config, const std::filesystem::path& out) {
  const std::vector<double> betas =
      linspace(config.number("stability_map.beta_min"), config.number("stability_map.beta_max"),
               config.integer("stability_map.beta_points"), "stability map beta range");
  const std::vector<double> Qs = linspace(config.number("stability_map.q_min"), config.number("stability_map.q_max"),
                                          config.integer("stability_map.q_points"), "stability map Q range");
  const auto map = dispersion::stability_map(betas, Qs);

  RunDirectory run(out, "stability-map", config, {"stability_map", "output"});
  CsvWriter csv(run.file("stability_map.csv"), run.digest(), {"beta", "Q", "growth", "unstable"});
  std::size_t unstable_cells = 0;
  double peak = 0.0;
  for (std::size_t ib = 0; ib < betas.size(); ++ib) {
    for (std::size_t iq = 0; iq < Qs.size(); ++iq) {
      csv.row("{:.17g},{:.17g},{:.17g},{}", betas[ib], Qs[iq], map.growth_at(ib, iq), map.unstable_at(ib, iq) ? 1 : 0);
      unstable_cells += map.unstable_at(ib, iq);
      peak = std::max(peak, map.growth_at(ib, iq));
    }
  }
  csv.close();

  CsvWriter edges(run.file("band_edges.csv"), run.digest(), {"beta", "q_lo", "q_hi", "Q_star", "gamma_star"});
  for (double beta : betas) {
    const auto band = dispersion::unstable_band(beta);
    const auto best = dispersion::max_growth(beta);
    edges.row("{:.17g},{:.17g},{:.17g},{},{:.17g}", beta, band.q_lo, band.q_hi,
              best.Q_star ? fmt::format("{:.17g}", *best.Q_star) : std::string(), best.gamma_star);
  }
  edges.close();

  if (config.flag("output.plots")) {
    const int w = static_cast<int>(Qs.size()), h = static_cast<int>(betas.size());
    plot::Canvas canvas(w, h);
    for (int ib = 0; ib < h; ++ib)
      for (int iq = 0; iq < w; ++iq)
        canvas.set(iq, h - 1 - ib, plot::colour_scale(0.5 + 0.5 * (peak > 0.0 ? map.growth_at(ib, iq) / peak : 0.0)));
    const plot::Panel p{0, 0, w, h, Qs.front(), Qs.back(), betas.front(), betas.back()};
    std::vector<double> lo, hi;
    for (double beta : betas) {
      const auto band = dispersion::unstable_band(beta);
      lo.push_back(band.q_lo);
      hi.push_back(band.q_hi);
    }
    for (std::size_t i = 0; i < betas.size(); ++i) {
      if (lo[i] > 0.0) canvas.set(static_cast<int>(std::lround(p.px(lo[i]))), static_cast<int>(std::lround(p.py(betas[i]))), plot::kBlack);
      canvas.set(static_cast<int>(std::lround(p.px(hi[i]))), static_cast<int>(std::lround(p.py(betas[i]))), plot::kBlack);
    }
    canvas.write_ppm(run.file("stability_map.ppm"));
  }
  run.summary()["unstable_cells"] = unstable_cells;
  run.summary()["max_growth"] = peak;
  run.write_manifest();
  fmt::print("{} x {} map, {} unstable cells, max growth {:.6g}\n", betas.size(), Qs.size(), unstable_cells, peak);
}

}  // namespace photonfluid::cli
