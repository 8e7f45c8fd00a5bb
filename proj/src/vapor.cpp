#include "photonfluid/vapor.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "photonfluid/error.hpp"

namespace photonfluid::vapor {

using constants::c;
using constants::epsilon0;
using constants::hbar;

double units::mhz_to_rad_per_s(double mhz) { return 2.0 * std::numbers::pi * 1e6 * mhz; }
double units::rad_per_s_to_mhz(double omega) { return omega / (2.0 * std::numbers::pi * 1e6); }

double TwoLevelAtom::saturation_intensity_from_dipole() const {
  return c * epsilon0 * hbar * hbar * linewidth * linewidth / (4.0 * dipole_moment * dipole_moment);
}

void TwoLevelAtom::validate() const {
  if (!(dipole_moment > 0.0) || !(linewidth > 0.0) || !(transition_wavelength > 0.0) ||
      !(saturation_intensity_resonant > 0.0))
    throw InvalidArgument("atom parameters must all be positive");
  const double estimate = saturation_intensity_from_dipole();
  if (std::abs(saturation_intensity_resonant / estimate - 1.0) > 0.1)
    throw InvalidArgument(fmt::format(
        "tabulated resonant saturation intensity {} W/m^2 disagrees with c eps0 hbar^2 Gamma^2 / 4 mu^2 "
        "= {} W/m^2 by more than 10% (unit error?)",
        saturation_intensity_resonant, estimate));
}

TwoLevelAtom rubidium85_d2() {
  TwoLevelAtom atom;
  atom.dipole_moment = 2.069e-29;
  atom.linewidth = units::mhz_to_rad_per_s(6.06);
  atom.transition_wavelength = 780.241e-9;
  atom.saturation_intensity_resonant = 2.5 * units::mw_per_cm2;
  return atom;
}

double saturation_intensity(const TwoLevelAtom& atom, double detuning) {
  const double ratio = detuning / atom.linewidth;
  return 4.0 * ratio * ratio * atom.saturation_intensity_resonant;
}

Validity validity(const TwoLevelAtom& atom, const VaporConditions& conditions) {
  Validity v;
  v.far_detuned = std::abs(conditions.detuning) >= 10.0 * atom.linewidth;
  const double is = saturation_intensity(atom, conditions.detuning);
  v.kerr = is > 0.0 && conditions.drive_intensity / is <= 0.2;
  return v;
}

double rabi_frequency(const TwoLevelAtom& atom, double intensity) {
  const double e0 = std::sqrt(2.0 * intensity / (c * epsilon0));
  return atom.dipole_moment * e0 / hbar;
}

std::complex<double> susceptibility(const TwoLevelAtom& atom, const VaporConditions& conditions,
                                    DensityPrefactor prefactor) {
  const double mu = atom.dipole_moment;
  const double na = conditions.atomic_density;
  const double density_factor = prefactor == DensityPrefactor::single ? na : na * na;
  const double amplitude = mu * mu * density_factor / (hbar * epsilon0);
  const double delta = conditions.detuning;
  const double gamma = atom.linewidth;
  const double rabi = rabi_frequency(atom, conditions.drive_intensity);
  const double denom = delta * delta + 0.25 * gamma * gamma + 0.5 * rabi * rabi;
  return -amplitude * std::complex<double>{delta, -0.5 * gamma} / denom;
}

double refractive_index(std::complex<double> chi, IndexModel model) {
  if (model == IndexModel::dilute) return 1.0 + 0.5 * chi.real();
  return std::sqrt(1.0 + chi).real();
}

KerrCoefficients kerr_coefficients(const TwoLevelAtom& atom, double atomic_density, double detuning) {
  if (detuning == 0.0)
    throw InvalidArgument("Kerr expansion is invalid on resonance (detuning = 0)");
  const double mu2 = atom.dipole_moment * atom.dipole_moment;
  const double gamma = atom.linewidth;
  const double ratio = detuning / gamma;
  KerrCoefficients k;
  k.n0 = 1.0 - atomic_density * mu2 / (2.0 * epsilon0 * hbar * gamma) / ratio;
  k.n2 = atomic_density * mu2 * mu2 / (2.0 * c * epsilon0 * epsilon0 * hbar * hbar * hbar * gamma * gamma * gamma) /
         (ratio * ratio * ratio);
  k.far_detuned = std::abs(detuning) >= 10.0 * gamma;
  return k;
}

FeasibilityReport feasibility_report(const TwoLevelAtom& atom, const VaporConditions& conditions,
                                     std::optional<double> wavelength) {
  FeasibilityReport r;
  r.wavelength = wavelength.value_or(atom.transition_wavelength);
  r.kerr = kerr_coefficients(atom, conditions.atomic_density, conditions.detuning);
  r.saturation_intensity = saturation_intensity(atom, conditions.detuning);
  r.intensity_ratio = conditions.drive_intensity / r.saturation_intensity;
  r.validity = validity(atom, conditions);
  r.delta_n = r.kerr.n2 * conditions.drive_intensity;
  if (r.delta_n != 0.0) {
    r.length_scale = r.wavelength / std::abs(r.delta_n);
    r.recommended_length = 5.0 * *r.length_scale;
  } else {
    r.notes.emplace_back("delta n = 0: required sample length diverges");
  }
  if (!r.validity.far_detuned) r.notes.emplace_back("|delta| < 10 Gamma: absorption is not negligible");
  if (!r.validity.kerr) r.notes.emplace_back("I / I_s > 0.2: Kerr (first-order) expansion is questionable");

  r.field_intensity = 2.0 * conditions.drive_intensity / (c * epsilon0);
  r.chi3 = r.kerr.n0 * r.kerr.n2 * c * epsilon0;
  if (r.kerr.n0 >= 1.0 && r.field_intensity > 0.0) {
    r.fluid = scales::derive_scales({r.wavelength, r.kerr.n0, r.chi3}, r.field_intensity);
  } else if (r.kerr.n0 < 1.0) {
    r.notes.emplace_back("n0 < 1 (blue detuning): fluid scales not derived");
  }
  if (r.kerr.n2 > 0.0) r.notes.emplace_back("n2 > 0: self-focusing medium, no stable fluid of light");
  return r;
}

std::string FeasibilityReport::to_text() const {
  const auto opt_mm = [](const std::optional<double>& v) {
    return v ? fmt::format("{:.6g}", *v / units::mm) : std::string("divergent");
  };
  std::string out;
  out += fmt::format("wavelength_nm: {:.6g}\n", wavelength * 1e9);
  out += fmt::format("n0: {:.12g}\n", kerr.n0);
  out += fmt::format("n2_cm2_per_W: {:.6g}\n", kerr.n2 / units::cm2_per_w);
  out += fmt::format("saturation_intensity_W_per_cm2: {:.6g}\n", saturation_intensity / units::w_per_cm2);
  out += fmt::format("intensity_ratio: {:.6g}\n", intensity_ratio);
  out += fmt::format("far_detuned: {}\n", validity.far_detuned);
  out += fmt::format("kerr_valid: {}\n", validity.kerr);
  out += fmt::format("delta_n: {:.6g}\n", delta_n);
  out += fmt::format("length_scale_mm: {}\n", opt_mm(length_scale));
  out += fmt::format("recommended_length_mm: {}\n", opt_mm(recommended_length));
  out += fmt::format("field_intensity_V2_per_m2: {:.6g}\n", field_intensity);
  out += fmt::format("chi3_m2_per_V2: {:.6g}\n", chi3);
  if (fluid) {
    out += fmt::format("regime: {}\n", scales::to_string(fluid->regime));
    if (fluid->cs_single) out += fmt::format("sound_speed_single: {:.6g}\n", *fluid->cs_single);
    if (fluid->cs_two) out += fmt::format("sound_speed_two: {:.6g}\n", *fluid->cs_two);
    out += fmt::format("healing_length_um: {}\n",
                       fluid->xi_physical ? fmt::format("{:.6g}", *fluid->xi_physical * 1e6)
                                          : std::string("divergent"));
  }
  for (const auto& n : notes) out += fmt::format("note: {}\n", n);
  return out;
}

std::vector<ScanRow> detuning_scan(const TwoLevelAtom& atom, std::span<const double> densities,
                                   std::span<const double> detunings) {
  for (double d : detunings)
    if (d == 0.0) throw InvalidArgument("detuning scan must exclude zero detuning");
  std::vector<ScanRow> rows;
  rows.reserve(densities.size() * detunings.size());
  for (double na : densities) {
    for (double d : detunings) {
      rows.push_back({d / atom.linewidth, na, kerr_coefficients(atom, na, d).n2, saturation_intensity(atom, d)});
    }
  }
  return rows;
}

}  // namespace photonfluid::vapor
