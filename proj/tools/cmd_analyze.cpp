#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "output.hpp"
#include "photonfluid/diagnostics.hpp"
#include "photonfluid/dispersion.hpp"
#include "photonfluid/error.hpp"
#include "photonfluid/scales.hpp"
#include "photonfluid/snapshot_io.hpp"
#include "photonfluid/solver.hpp"
#include "plot.hpp"

namespace photonfluid::cli {

namespace {

struct IndexRow {
  std::size_t index = 0;
  double z = 0.0;
};

std::vector<IndexRow> read_index(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("{}: snapshot index missing", path.string()));
  std::vector<IndexRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    boost::algorithm::split(cells, line, boost::algorithm::is_any_of(","));
    try {
      rows.push_back({std::stoul(cells.at(0)), std::stod(cells.at(1))});
    } catch (const std::exception&) {
      throw IoError(fmt::format("{}: malformed row '{}'", path.string(), line));
    }
  }
  return rows;
}

double config_number(const nlohmann::json& manifest, const char* section, const char* key) {
  try {
    return std::stod(manifest.at("config").at(section).at(key).get<std::string>());
  } catch (const std::exception&) {
    throw InvalidArgument(fmt::format("manifest lacks {}.{}", section, key));
  }
}

void plot_far_field(const fs::path& path, const diagnostics::Raster& ff) {
  double hi = 0.0;
  for (double v : ff.values) hi = std::max(hi, v);
  plot::Canvas canvas(static_cast<int>(ff.nx), static_cast<int>(ff.ny));
  for (std::size_t j = 0; j < ff.ny; ++j)
    for (std::size_t i = 0; i < ff.nx; ++i) {
      const double v = ff.at(i, j);
      const double t = v > 0.0 && hi > 0.0 ? 1.0 + std::log10(v / hi) / 12.0 : 0.0;
      canvas.set(static_cast<int>(i), static_cast<int>(ff.ny - 1 - j), plot::colour_scale(0.5 + 0.5 * t));
    }
  canvas.write_ppm(path);
}

}  // namespace

void cmd_analyze(const Config& config, const fs::path& run_dir, const fs::path& out) {
  const nlohmann::json manifest = read_manifest(run_dir);
  if (manifest.value("command", "") != "simulate")
    throw InvalidArgument(fmt::format("{} is not a simulate run", run_dir.string()));
  if (manifest.value("status", "ok") != "ok")
    fmt::print(stderr, "warning: run stopped early at z = {}\n", manifest.value("failure_z", 0.0));
  const std::size_t envelopes = manifest.at("summary").value("envelopes", std::size_t{0});
  if (envelopes == 0) throw InvalidArgument("manifest does not record the envelope count");

  const auto rows = read_index(run_dir / "index.csv");
  if (rows.empty()) throw IoError(fmt::format("{}: no snapshots listed", run_dir.string()));
  std::vector<std::string> missing;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].index != k) missing.push_back(fmt::format("index {} (found {})", k, rows[k].index));
    for (std::size_t e = 0; e < envelopes; ++e) {
      const std::string name = fmt::format("snap_{:05d}.e{}.pfld", rows[k].index, e);
      if (!fs::exists(run_dir / name)) missing.push_back(name);
    }
  }
  if (!missing.empty())
    throw IoError(fmt::format("{}: missing snapshots: {}", run_dir.string(), boost::algorithm::join(missing, ", ")));

  std::vector<solver::FieldState> snaps;
  for (const auto& row : rows) {
    solver::FieldState s;
    for (std::size_t e = 0; e < envelopes; ++e) {
      const auto f = io::read_field(run_dir / fmt::format("snap_{:05d}.e{}.pfld", row.index, e));
      if (e == 0) {
        s.grid.nx = f.header.nx;
        s.grid.ny = f.header.ny;
        s.grid.lx = f.header.lx;
        s.grid.ly = f.header.ly;
        s.z = f.header.z;
      } else if (f.header.nx != s.grid.nx || f.header.ny != s.grid.ny) {
        throw IoError(fmt::format("snapshot {} envelopes disagree in size", row.index));
      }
      s.envelopes.push_back(f.data);
    }
    snaps.push_back(std::move(s));
  }

  const double g = config_number(manifest, "run", "g");
  const double rho0 = config_number(manifest, "run", "rho0");
  const double v0 = config_number(manifest, "run", "v0");
  const auto fluid = scales::fluid_scales(g, rho0);
  const double xi = *fluid.xi_two;
  const double beta = scales::mach_number(std::abs(v0), fluid);

  const std::string channel_name = config.text("analyze.channel");
  diagnostics::DensityChannel channel;
  if (channel_name == "total") {
    channel = diagnostics::DensityChannel::total;
  } else if (channel_name == "difference") {
    if (envelopes != 2) throw InvalidArgument("difference channel needs a dual-envelope run");
    channel = diagnostics::DensityChannel::difference;
  } else {
    throw InvalidArgument(fmt::format("analyze.channel must be total or difference (got {})", channel_name));
  }
  const std::vector<double> Qs = config.numbers("analyze.q_values");
  if (Qs.empty()) throw InvalidArgument("analyze.q_values is empty");

  std::vector<diagnostics::PeakSample> peaks;
  for (const auto& s : snaps) peaks.push_back({s.z, diagnostics::peak_mode_amplitude(s)});
  diagnostics::GrowthWindow window;
  window.amp_lo = config.number("analyze.amp_lo");
  window.amp_hi = config.number("analyze.amp_hi");
  if (!(window.amp_lo > 0.0) || !(window.amp_hi > window.amp_lo))
    throw InvalidArgument("analyze.amp_lo and analyze.amp_hi must satisfy 0 < amp_lo < amp_hi");
  if (config.flag("analyze.linear_cutoff")) window.z_max = diagnostics::linear_regime_end(peaks, window.amp_hi);

  RunDirectory run(out, "analyze", config, {"analyze", "output"});
  run.summary()["run_directory"] = fs::absolute(run_dir).string();
  run.summary()["run_config_digest"] = manifest.value("config_digest", "");
  run.summary()["beta"] = beta;
  run.summary()["xi"] = xi;
  run.summary()["linear_regime_end"] = window.z_max ? nlohmann::json(*window.z_max) : nlohmann::json(nullptr);

  CsvWriter growth(run.file("growth.csv"), run.digest(),
                   {"Q", "q", "gamma", "uncertainty", "samples", "z_first", "z_last", "theory", "relative_error",
                    "consistent_with_zero", "fit_ok", "note"});
  std::size_t fitted = 0;
  for (double Q : Qs) {
    const auto history = diagnostics::mode_history(snaps, {Q / xi, 0.0}, channel);
    CsvWriter modes(run.file(fmt::format("mode_Q{}.csv", Q)), run.digest(), {"z", "re", "im", "abs"});
    for (const auto& smp : history.samples)
      modes.row("{:.17g},{:.17g},{:.17g},{:.17g}", smp.z, smp.amplitude.real(), smp.amplitude.imag(),
                std::abs(smp.amplitude));
    modes.close();
    const auto fit = diagnostics::fit_growth_rate(history, window);
    const double theory = dispersion::growth_rate({Q, beta}) / (xi * xi);
    const std::string rel = fit.ok && theory > 0.0 ? fmt::format("{:.6g}", (fit.gamma - theory) / theory) : "";
    const bool zero = fit.ok && std::abs(fit.gamma) < 3.0 * fit.uncertainty;
    growth.row("{:.17g},{:.17g},{:.17g},{:.6g},{},{:.17g},{:.17g},{:.17g},{},{},{},\"{}\"", Q, Q / xi, fit.gamma,
               fit.uncertainty, fit.samples_used, fit.z_first, fit.z_last, theory, rel, zero ? 1 : 0, fit.ok ? 1 : 0,
               fit.diagnostic);
    fitted += fit.ok;
    fmt::print("Q={:<6g} gamma={:<10.5g} +- {:<9.2g} theory={:<10.5g} {}\n", Q, fit.gamma, fit.uncertainty, theory,
               fit.ok ? "" : fit.diagnostic);
  }
  growth.close();

  CsvWriter census(run.file("vortex_census.csv"), run.digest(),
                   {"index", "z", "envelope", "count", "positive", "negative"});
  CsvWriter band(run.file("band_power.csv"), run.digest(), {"z", "band_power", "peak_mode_amplitude"});
  const auto unstable = dispersion::unstable_band(beta);
  const double floor = config.number("analyze.vortex_floor");
  const bool far = config.flag("analyze.far_field");
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const auto& s = snaps[k];
    for (std::size_t e = 0; e < envelopes; ++e) {
      const auto vortices = diagnostics::detect_vortices(s.grid, s.envelopes[e], floor);
      CsvWriter list(run.file(fmt::format("vortices_{:05d}.e{}.csv", k, e)), run.digest(), {"x", "y", "charge"});
      std::size_t pos = 0, neg = 0;
      for (const auto& v : vortices) {
        list.row("{},{},{}", v.x, v.y, v.charge);
        (v.charge > 0 ? pos : neg) += 1;
      }
      list.close();
      census.row("{},{:.17g},{},{},{},{}", k, s.z, e, vortices.size(), pos, neg);
    }
    band.row("{:.17g},{:.6e},{:.6e}", s.z,
             unstable.empty() ? 0.0 : diagnostics::band_power(s, xi, unstable.q_lo, unstable.q_hi), peaks[k].amplitude);
    if (far) {
      const auto ff = diagnostics::far_field(s);
      const double kx = 2.0 * std::numbers::pi / s.grid.dx(), ky = 2.0 * std::numbers::pi / s.grid.dy();
      io::write_raster(run.file(fmt::format("farfield_{:05d}.pras", k)),
                       {static_cast<std::uint32_t>(ff.nx), static_cast<std::uint32_t>(ff.ny), kx, ky, s.z}, ff.values);
    }
  }
  census.close();
  band.close();
  if (config.flag("output.plots")) plot_far_field(run.file("farfield_final.ppm"), diagnostics::far_field(snaps.back()));

  run.summary()["snapshots"] = snaps.size();
  run.summary()["fitted_modes"] = fitted;
  run.write_manifest();
  fmt::print("{} snapshots analysed, {} of {} modes fitted\n", snaps.size(), fitted, Qs.size());
}

}  // namespace photonfluid::cli
