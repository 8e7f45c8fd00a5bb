#include <cmath>
#include <regex>

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

std::size_t positive_count(const Config& config, const std::string& key) {
  const long v = config.integer(key);
  if (v <= 0) throw InvalidArgument(fmt::format("{} must be positive (got {})", key, v));
  return static_cast<std::size_t>(v);
}

void remove_stale_outputs(const fs::path& dir) {
  static const std::regex stale(R"(snap_\d+\.e\d+\.pfld|index\.csv|summary\.csv|density_final\.ppm)");
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && std::regex_match(entry.path().filename().string(), stale)) fs::remove(entry.path());
}

void plot_density(const fs::path& path, const solver::FieldState& s) {
  const auto rho = s.density();
  double lo = rho[0], hi = rho[0];
  for (double r : rho) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  plot::Canvas canvas(static_cast<int>(s.grid.nx), static_cast<int>(s.grid.ny));
  for (std::size_t j = 0; j < s.grid.ny; ++j)
    for (std::size_t i = 0; i < s.grid.nx; ++i)
      canvas.set(static_cast<int>(i), static_cast<int>(s.grid.ny - 1 - j),
                 plot::colour_scale(hi > lo ? (rho[j * s.grid.nx + i] - lo) / (hi - lo) : 0.5));
  canvas.write_ppm(path);
}

}  // namespace

void cmd_simulate(const Config& config, const fs::path& out) {
  solver::Grid grid;
  grid.nx = positive_count(config, "grid.nx");
  grid.ny = positive_count(config, "grid.ny");
  grid.lx = config.number("grid.lx");
  grid.ly = config.number("grid.ly");

  solver::RunSpec spec;
  spec.mode = solver::stream_mode_from_string(config.text("run.mode"));
  spec.g = config.number("run.g");
  spec.rho0 = config.number("run.rho0");
  spec.v0 = config.number("run.v0");
  spec.noise_amplitude = config.number("run.noise");
  spec.noise_seed = static_cast<std::uint64_t>(config.integer("run.seed"));
  spec.z_end = config.number("run.z_end");
  spec.snapshot_every = positive_count(config, "run.snapshot_every");
  spec.dealias = config.flag("run.dealias");
  if (!(spec.g > 0.0) || !(spec.rho0 > 0.0))
    throw InvalidArgument("run.g and run.rho0 must be positive for a defocusing fluid");

  const double flow_angle = config.number("run.flow_angle");
  if (!(std::abs(flow_angle) < 1.0)) throw InvalidArgument("run.flow_angle must lie in (-1, 1)");
  const auto flow = scales::flow_speed_internal(std::asin(std::abs(flow_angle)), config.number("run.paraxial_limit"));
  if (flow.paraxial_warning)
    fmt::print(stderr, "warning: flow angle sin(theta) = {} exceeds the paraxial limit {}\n", flow_angle,
               config.number("run.paraxial_limit"));

  const double rho_max = spec.mode == solver::StreamMode::dual_envelope ? 2.0 * spec.rho0 : 4.0 * spec.rho0;
  const double dz = config.number("grid.dz");
  grid.dz = dz > 0.0 ? dz : (grid.validate(), solver::default_dz(grid, spec.g, rho_max));

  const auto fluid = scales::fluid_scales(spec.g, spec.rho0);
  const double xi = *fluid.xi_two;
  const double beta = scales::mach_number(std::abs(spec.v0), fluid);
  const auto band = dispersion::unstable_band(beta);

  solver::FieldState state = solver::init_two_stream(grid, spec);

  RunDirectory run(out, "simulate", config, {"grid", "run", "output"});
  run.set_seed(spec.noise_seed);
  remove_stale_outputs(run.dir());

  CsvWriter index(run.file("index.csv"), run.digest(), {"index", "z", "checksum"});
  CsvWriter summary(run.file("summary.csv"), run.digest(),
                    {"z", "norm", "norm_drift", "band_power", "peak_mode_amplitude"});
  const double n0 = solver::norm(state);
  std::size_t count = 0;
  double last_drift = 0.0, last_band = 0.0;
  solver::FieldState last = state;
  const auto observer = [&](const solver::FieldState& s) {
    for (std::size_t e = 0; e < s.envelope_count(); ++e) {
      const io::RasterHeader h{static_cast<std::uint32_t>(s.grid.nx), static_cast<std::uint32_t>(s.grid.ny), s.grid.lx,
                               s.grid.ly, s.z};
      io::write_field(run.file(fmt::format("snap_{:05d}.e{}.pfld", count, e)), h, s.envelopes[e]);
    }
    index.row("{},{:.17g},{}", count, s.z, solver::checksum(s));
    last_drift = (solver::norm(s) - n0) / n0;
    last_band = band.empty() ? 0.0 : diagnostics::band_power(s, xi, band.q_lo, band.q_hi);
    summary.row("{:.17g},{:.17g},{:.6e},{:.6e},{:.6e}", s.z, solver::norm(s), last_drift, last_band,
                diagnostics::peak_mode_amplitude(s));
    last = s;
    ++count;
  };

  run.summary()["envelopes"] = state.envelope_count();
  run.summary()["dz"] = grid.dz;
  run.summary()["xi"] = xi;
  run.summary()["beta"] = beta;
  run.summary()["band"] = {band.q_lo, band.q_hi};
  try {
    solver::propagate(std::move(state), spec, observer, false);
  } catch (const NonFiniteField& e) {
    index.close();
    summary.close();
    run.summary()["snapshots"] = count;
    run.mark_failure(e.z(), e.what());
    run.write_manifest();
    throw;
  }
  index.close();
  summary.close();
  if (config.flag("output.plots")) plot_density(run.file("density_final.ppm"), last);

  run.summary()["snapshots"] = count;
  run.summary()["steps"] = spec.z_end > 0.0 ? static_cast<long>(std::ceil(spec.z_end / grid.dz - 1e-9)) : 0;
  run.summary()["norm_drift"] = last_drift;
  run.summary()["final_band_power"] = last_band;
  run.write_manifest();
  fmt::print("simulated {} x {} to z = {} (beta = {:.4g}, xi = {:.4g}, dz = {:.4g}); {} snapshots\n", grid.nx, grid.ny,
             spec.z_end, beta, xi, grid.dz, count);
  fmt::print("norm drift {:.3e}; band power {:.3e} in Q ({:.4g}, {:.4g})\n", last_drift, last_band, band.q_lo,
             band.q_hi);
}

}  // namespace photonfluid::cli
