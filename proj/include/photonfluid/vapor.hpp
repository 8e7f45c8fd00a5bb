#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "photonfluid/scales.hpp"

// Two-level atomic vapour as a Kerr medium. Everything is SI internally; the
// units namespace converts from the laboratory units used on the command line.

namespace photonfluid::vapor {

namespace constants {
inline constexpr double c = 299792458.0;              // m/s
inline constexpr double epsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double hbar = 1.054571817e-34;       // J s
}  // namespace constants

namespace units {
inline constexpr double per_cm3 = 1e6;          // cm^-3 -> m^-3
inline constexpr double w_per_cm2 = 1e4;        // W/cm^2 -> W/m^2
inline constexpr double mw_per_cm2 = 10.0;      // mW/cm^2 -> W/m^2
inline constexpr double cm2_per_w = 1e-4;       // cm^2/W -> m^2/W
inline constexpr double mm = 1e-3;              // mm -> m
double mhz_to_rad_per_s(double mhz);            // 2 pi * 1e6 * mhz
double rad_per_s_to_mhz(double omega);
}  // namespace units

struct TwoLevelAtom {
  double dipole_moment = 0.0;                  // C m
  double linewidth = 0.0;                      // Gamma, rad/s
  double transition_wavelength = 0.0;          // m
  double saturation_intensity_resonant = 0.0;  // I_s^0, W/m^2

  /// c eps0 hbar^2 Gamma^2 / (4 mu^2).
  double saturation_intensity_from_dipole() const;
  /// Positive parameters and the tabulated I_s^0 within 10% of the dipole
  /// estimate; throws InvalidArgument otherwise.
  void validate() const;
};

/// 85Rb D2 line with the effective far-detuned dipole moment for linear
/// polarisation.
TwoLevelAtom rubidium85_d2();

struct VaporConditions {
  double atomic_density = 0.0;   // m^-3
  double detuning = 0.0;         // delta = omega0 - omega_a, rad/s
  double drive_intensity = 0.0;  // W/m^2
};

struct Validity {
  bool far_detuned = false;  // |delta| >= 10 Gamma
  bool kerr = false;         // I / I_s <= 0.2
};

Validity validity(const TwoLevelAtom& atom, const VaporConditions& conditions);

/// Density power in the susceptibility prefactor. The single power is
/// consistent with the first-order Kerr expansion and the quoted 85Rb numbers.
enum class DensityPrefactor { single, literal_squared };

#ifdef PHOTONFLUID_LITERAL_DENSITY_SQUARED
inline constexpr DensityPrefactor kDefaultPrefactor = DensityPrefactor::literal_squared;
#else
inline constexpr DensityPrefactor kDefaultPrefactor = DensityPrefactor::single;
#endif

/// Rabi frequency mu E0 / hbar for a drive of intensity I = c eps0 |E0|^2 / 2.
double rabi_frequency(const TwoLevelAtom& atom, double intensity);

/// chi = -(mu^2 n_a / hbar eps0) (delta - i Gamma/2) / (delta^2 + Gamma^2/4 + Omega_R^2/2).
std::complex<double> susceptibility(const TwoLevelAtom& atom, const VaporConditions& conditions,
                                    DensityPrefactor prefactor = kDefaultPrefactor);

enum class IndexModel { dilute, exact };
/// n = 1 + Re chi / 2 (dilute) or Re sqrt(1 + chi) (exact).
double refractive_index(std::complex<double> chi, IndexModel model = IndexModel::dilute);

struct KerrCoefficients {
  double n0 = 1.0;
  double n2 = 0.0;  // m^2/W
  bool far_detuned = false;
};

/// First order in I / I_s of the far-detuned response:
///   n0 = 1 - (n_a mu^2 / 2 eps0 hbar Gamma) / (delta / Gamma),
///   n2 = (n_a mu^4 / 2 c eps0^2 hbar^3 Gamma^3) / (delta / Gamma)^3.
/// Throws InvalidArgument for delta == 0.
KerrCoefficients kerr_coefficients(const TwoLevelAtom& atom, double atomic_density, double detuning);

/// I_s = 4 (delta / Gamma)^2 I_s^0; zero at delta == 0, where the far-detuned
/// form degenerates.
double saturation_intensity(const TwoLevelAtom& atom, double detuning);

struct FeasibilityReport {
  double wavelength = 0.0;  // m
  KerrCoefficients kerr;
  double saturation_intensity = 0.0;  // W/m^2
  double intensity_ratio = 0.0;       // I / I_s
  Validity validity;
  double delta_n = 0.0;  // n2 I
  // lambda0 / |delta n| and 5x that; empty when delta n == 0 (divergent)
  std::optional<double> length_scale;
  std::optional<double> recommended_length;
  // Handoff to the fluid description: chi3 |E0|^2 = 2 n0 n2 I with
  // |E0|^2 = 2 I / (c eps0), so chi3 = n0 n2 c eps0.
  double field_intensity = 0.0;  // |E0|^2, V^2/m^2
  double chi3 = 0.0;             // m^2/V^2
  std::optional<scales::FluidScales> fluid;
  std::vector<std::string> notes;

  /// "key: value" lines in laboratory units.
  std::string to_text() const;
};

FeasibilityReport feasibility_report(const TwoLevelAtom& atom, const VaporConditions& conditions,
                                     std::optional<double> wavelength = std::nullopt);

struct ScanRow {
  double detuning_over_gamma = 0.0;
  double atomic_density = 0.0;        // m^-3
  double n2 = 0.0;                    // m^2/W
  double saturation_intensity = 0.0;  // W/m^2
};

/// One row per (density, detuning) pair, densities outermost. Throws on a
/// zero detuning.
std::vector<ScanRow> detuning_scan(const TwoLevelAtom& atom, std::span<const double> densities,
                                   std::span<const double> detunings);

}  // namespace photonfluid::vapor
