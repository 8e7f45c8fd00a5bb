#include "photonfluid/scales.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "photonfluid/error.hpp"

namespace photonfluid::scales {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::defocusing: return "defocusing";
    case Regime::non_interacting: return "non_interacting";
    case Regime::focusing: return "focusing";
  }
  return "unknown";
}

void OpticalMedium::validate() const {
  if (!(wavelength_vacuum > 0.0))
    throw InvalidArgument(fmt::format("wavelength must be positive (got {})", wavelength_vacuum));
  if (!(n_linear >= 1.0))
    throw InvalidArgument(fmt::format("linear index must be >= 1 (got {})", n_linear));
  if (!std::isfinite(chi3)) throw InvalidArgument("chi3 must be finite");
}

double OpticalMedium::k0() const { return 2.0 * std::numbers::pi / wavelength_vacuum; }

Regime OpticalMedium::regime() const {
  if (chi3 < 0.0) return Regime::defocusing;
  if (chi3 > 0.0) return Regime::focusing;
  return Regime::non_interacting;
}

namespace {

void fill_sound(FluidScales& s) {
  if (s.regime == Regime::focusing) return;
  const double gr = s.g * s.rho0;
  s.cs_single = std::sqrt(gr);
  s.cs_two = std::sqrt(2.0 * gr);
  if (*s.cs_single > 0.0) {
    s.xi_single = 1.0 / *s.cs_single;
    s.xi_two = 1.0 / *s.cs_two;
  }
}

}  // namespace

FluidScales derive_scales(const OpticalMedium& medium, double background_intensity) {
  medium.validate();
  if (!(background_intensity >= 0.0) || !std::isfinite(background_intensity))
    throw InvalidArgument(
        fmt::format("background intensity must be finite and >= 0 (got {})", background_intensity));

  const double n = medium.n_linear;
  FluidScales s;
  s.rho0 = background_intensity;
  s.g = -medium.chi3 / (2.0 * n * n);
  s.regime = medium.regime();
  fill_sound(s);
  if (s.regime == Regime::defocusing && background_intensity > 0.0)
    s.xi_physical = std::sqrt(-2.0 / (medium.chi3 * background_intensity)) / medium.k0();
  return s;
}

FluidScales fluid_scales(double g, double rho0) {
  if (!std::isfinite(g) || !(rho0 >= 0.0) || !std::isfinite(rho0))
    throw InvalidArgument(fmt::format("invalid fluid parameters g = {}, rho0 = {}", g, rho0));
  FluidScales s;
  s.rho0 = rho0;
  s.g = g;
  s.regime = g > 0.0 ? Regime::defocusing : (g < 0.0 ? Regime::focusing : Regime::non_interacting);
  fill_sound(s);
  return s;
}

FlowGeometry flow_speed_internal(double theta_internal, double paraxial_threshold) {
  if (!(theta_internal >= 0.0 && theta_internal < std::numbers::pi / 2.0))
    throw InvalidArgument(fmt::format(
        "propagation angle {} rad outside [0, pi/2): the paraxial description breaks down",
        theta_internal));
  FlowGeometry geo;
  geo.theta_internal = theta_internal;
  geo.v = std::sin(theta_internal);
  geo.paraxial_warning = geo.v > paraxial_threshold;
  return geo;
}

FlowGeometry flow_speed_incidence(double theta_incidence, double n_linear,
                                  double paraxial_threshold) {
  if (!(theta_incidence >= 0.0 && theta_incidence < std::numbers::pi / 2.0))
    throw InvalidArgument(
        fmt::format("incidence angle {} rad outside [0, pi/2)", theta_incidence));
  if (!(n_linear >= 1.0))
    throw InvalidArgument(fmt::format("linear index must be >= 1 (got {})", n_linear));
  FlowGeometry geo =
      flow_speed_internal(std::asin(std::sin(theta_incidence) / n_linear), paraxial_threshold);
  geo.theta_incidence = theta_incidence;
  return geo;
}

double mach_number(double v, const FluidScales& scales) {
  if (!scales.cs_two || *scales.cs_two <= 0.0)
    throw InvalidArgument("Mach number undefined: two-fluid sound speed is zero or undefined");
  if (v < 0.0) throw InvalidArgument("flow speed must be >= 0");
  return v / *scales.cs_two;
}

}  // namespace photonfluid::scales
