#pragma once

#include <optional>

namespace photonfluid::scales {

/// Sign class of the Kerr interaction.
enum class Regime {
  defocusing,       // chi3 < 0, repulsive photons, sound speed defined
  non_interacting,  // chi3 == 0
  focusing,         // chi3 > 0, attractive; sound speed undefined (filamentation)
};

const char* to_string(Regime r);

/// Homogeneous Kerr medium seen by a monochromatic carrier.
struct OpticalMedium {
  double wavelength_vacuum;  // m
  double n_linear;           // n = sqrt(1 + chi1)
  double chi3;               // m^2/V^2, signed

  /// Throws InvalidArgument if wavelength <= 0 or n < 1.
  void validate() const;
  double k0() const;  // vacuum wavenumber, 1/m
  Regime regime() const;
};

/// Fluid quantities in the rescaled coordinates (x, y, z) -> n k0 (x, y, z).
///
/// Sound speeds are std::nullopt in the focusing regime. Lengths are
/// std::nullopt whenever the corresponding sound speed is zero or undefined
/// (divergent healing length).
struct FluidScales {
  double rho0 = 0.0;  // background density |E0|^2 (or 1 in solver units)
  double g = 0.0;     // dimensionless coupling, > 0 for defocusing
  Regime regime = Regime::non_interacting;
  std::optional<double> cs_single;    // sqrt(g rho0)
  std::optional<double> cs_two;       // sqrt(2 g rho0)
  std::optional<double> xi_single;    // 1 / cs_single
  std::optional<double> xi_two;       // 1 / cs_two
  std::optional<double> xi_physical;  // m, k0^-1 sqrt(-2 / (chi3 |E0|^2))

  bool sound_defined() const { return cs_two.has_value(); }
};

/// Physical medium and background intensity |E0|^2 (V^2/m^2) to fluid scales.
/// The dimensionless coupling is g = -chi3 / (2 n^2).
FluidScales derive_scales(const OpticalMedium& medium, double background_intensity);

/// Fluid scales directly in solver units from (g, rho0).
FluidScales fluid_scales(double g, double rho0);

/// Transverse flow geometry of a tilted beam.
struct FlowGeometry {
  double theta_internal = 0.0;   // rad, propagation angle inside the medium
  double theta_incidence = 0.0;  // rad, incidence angle outside
  double v = 0.0;                // sin(theta_internal)
  bool paraxial_warning = false; // v above the soft paraxial threshold
};

inline constexpr double kDefaultParaxialThreshold = 0.3;

FlowGeometry flow_speed_internal(double theta_internal,
                                 double paraxial_threshold = kDefaultParaxialThreshold);

/// Snell refraction: sin(theta) = sin(theta_i) / n.
FlowGeometry flow_speed_incidence(double theta_incidence, double n_linear,
                                  double paraxial_threshold = kDefaultParaxialThreshold);

/// Mach number beta = v / cs_two. Throws InvalidArgument when cs_two is zero
/// or undefined.
double mach_number(double v, const FluidScales& scales);

}  // namespace photonfluid::scales
