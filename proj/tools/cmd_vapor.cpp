#include <fstream>

#include <fmt/format.h>

#include "commands.hpp"
#include "output.hpp"
#include "photonfluid/error.hpp"
#include "photonfluid/vapor.hpp"

namespace photonfluid::cli {

void cmd_vapor(const Config& config, const fs::path& out) {
  using namespace vapor;
  TwoLevelAtom atom;
  atom.dipole_moment = config.number("atom.dipole_moment");
  atom.linewidth = units::mhz_to_rad_per_s(config.number("atom.linewidth_mhz"));
  atom.transition_wavelength = config.number("atom.wavelength_nm") * 1e-9;
  atom.saturation_intensity_resonant = config.number("atom.isat0_mw_cm2") * units::mw_per_cm2;
  atom.validate();

  const VaporConditions conditions{config.number("vapor.atomic_density_cm3") * units::per_cm3,
                                   units::mhz_to_rad_per_s(config.number("vapor.detuning_mhz")),
                                   config.number("vapor.intensity_w_cm2") * units::w_per_cm2};
  if (!(conditions.atomic_density > 0.0)) throw InvalidArgument("vapor.atomic_density_cm3 must be positive");
  if (!(conditions.drive_intensity >= 0.0)) throw InvalidArgument("vapor.intensity_w_cm2 must be >= 0");
  const double wavelength_nm = config.number("vapor.wavelength_nm");
  const auto report = feasibility_report(
      atom, conditions, wavelength_nm > 0.0 ? std::optional<double>(wavelength_nm * 1e-9) : std::nullopt);

  std::vector<double> detunings;
  for (double r : config.numbers("vapor.scan_detunings_gamma")) detunings.push_back(r * atom.linewidth);
  std::vector<double> densities;
  for (double n : config.numbers("vapor.scan_densities_cm3")) densities.push_back(n * units::per_cm3);
  if (detunings.empty() || densities.empty()) throw InvalidArgument("vapor scan lists must not be empty");
  const auto rows = detuning_scan(atom, densities, detunings);

  RunDirectory run(out, "vapor", config, {"atom", "vapor", "output"});
  const std::string text = report.to_text();
  {
    std::ofstream f(run.file("report.txt"));
    f << "# config_digest: " << run.digest() << '\n' << text;
    if (!f) throw IoError("cannot write report.txt");
  }
  CsvWriter csv(run.file("detuning_scan.csv"), run.digest(),
                {"detuning_over_gamma", "detuning_mhz", "atomic_density_cm3", "n2_cm2_per_W",
                 "saturation_intensity_W_per_cm2"});
  for (const auto& r : rows)
    csv.row("{:.10g},{:.10g},{:.6g},{:.10g},{:.10g}", r.detuning_over_gamma,
            units::rad_per_s_to_mhz(r.detuning_over_gamma * atom.linewidth), r.atomic_density / units::per_cm3,
            r.n2 / units::cm2_per_w, r.saturation_intensity / units::w_per_cm2);
  csv.close();

  run.summary()["n2_cm2_per_W"] = report.kerr.n2 / units::cm2_per_w;
  run.summary()["saturation_intensity_W_per_cm2"] = report.saturation_intensity / units::w_per_cm2;
  run.summary()["delta_n"] = report.delta_n;
  run.summary()["length_scale_mm"] =
      report.length_scale ? nlohmann::json(*report.length_scale / units::mm) : nlohmann::json(nullptr);
  run.write_manifest();
  fmt::print("{}", text);
}

}  // namespace photonfluid::cli
