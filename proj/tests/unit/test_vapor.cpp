#include <doctest.h>

#include <cmath>
#include <vector>

#include "photonfluid/error.hpp"
#include "photonfluid/vapor.hpp"

using namespace photonfluid;
using namespace photonfluid::vapor;

namespace {

const TwoLevelAtom kRb = rubidium85_d2();
const double kNa = 1e12 * units::per_cm3;

double index_at(const TwoLevelAtom& atom, double na, double delta, double intensity) {
  return refractive_index(susceptibility(atom, {na, delta, intensity}, DensityPrefactor::single));
}

}  // namespace

TEST_SUITE("vapor") {

TEST_CASE("rubidium constants are self-consistent") {
  CHECK_NOTHROW(kRb.validate());
  CHECK(kRb.saturation_intensity_from_dipole() / kRb.saturation_intensity_resonant ==
        doctest::Approx(1.0).epsilon(0.1));
  TwoLevelAtom wrong = kRb;
  wrong.saturation_intensity_resonant = 2.5;  // mW/cm^2 mistaken for W/m^2
  CHECK_THROWS_AS(wrong.validate(), InvalidArgument);
  wrong = kRb;
  wrong.linewidth = -1.0;
  CHECK_THROWS_AS(wrong.validate(), InvalidArgument);
}

TEST_CASE("unit converters") {
  CHECK(units::mhz_to_rad_per_s(1.0) == doctest::Approx(2e6 * 3.141592653589793));
  CHECK(units::rad_per_s_to_mhz(units::mhz_to_rad_per_s(-120.0)) == doctest::Approx(-120.0));
  CHECK(2.5 * units::mw_per_cm2 == doctest::Approx(25.0));
}

TEST_CASE("susceptibility on resonance and far detuned") {
  const std::complex<double> on = susceptibility(kRb, {kNa, 0.0, 0.0});
  CHECK(on.real() == 0.0);
  CHECK(on.imag() > 0.0);
  for (double sign : {-1.0, 1.0}) {
    const double delta = sign * 20.0 * kRb.linewidth;
    const std::complex<double> chi = susceptibility(kRb, {kNa, delta, 0.0});
    CHECK(std::abs(chi.imag() / chi.real()) == doctest::Approx(1.0 / 40.0).epsilon(1e-12));
  }
}

TEST_CASE("weak-field susceptibility matches the linear index") {
  const double delta = -20.0 * kRb.linewidth;
  const std::complex<double> chi = susceptibility(kRb, {kNa, delta, 0.0});
  const KerrCoefficients k = kerr_coefficients(kRb, kNa, delta);
  // n0 neglects Gamma^2/4 against delta^2: a relative 1/1600 correction.
  CHECK((1.0 + 0.5 * chi.real() - 1.0) / (k.n0 - 1.0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(chi.real() > 0.0);  // red detuning raises the linear index
  CHECK(refractive_index(chi, IndexModel::exact) == doctest::Approx(1.0 + 0.5 * chi.real()).epsilon(1e-6));
}

TEST_CASE("literal density-squared prefactor") {
  const VaporConditions c{kNa, -20.0 * kRb.linewidth, 0.0};
  const auto single = susceptibility(kRb, c, DensityPrefactor::single);
  const auto squared = susceptibility(kRb, c, DensityPrefactor::literal_squared);
  CHECK(squared.real() / single.real() == doctest::Approx(kNa).epsilon(1e-12));
}

TEST_CASE("Kerr index at the reference detuning") {
  const double delta = units::mhz_to_rad_per_s(-120.0);
  const KerrCoefficients k = kerr_coefficients(kRb, kNa, delta);
  CHECK(k.far_detuned);
  CHECK(std::abs(k.n2 / (-7.5e-5 * units::cm2_per_w) - 1.0) < 0.15);
  CHECK(std::abs(k.n0 - 1.0) < 1e-3);
  CHECK_THROWS_AS(kerr_coefficients(kRb, kNa, 0.0), InvalidArgument);
}

TEST_CASE("Kerr sign and scaling laws") {
  for (double r : {-80.0, -20.0, -11.0, 11.0, 35.0}) {
    const double delta = r * kRb.linewidth;
    const KerrCoefficients k = kerr_coefficients(kRb, kNa, delta);
    const KerrCoefficients flipped = kerr_coefficients(kRb, kNa, -delta);
    const KerrCoefficients dense = kerr_coefficients(kRb, 2.0 * kNa, delta);
    const KerrCoefficients far = kerr_coefficients(kRb, kNa, 2.0 * delta);
    CHECK((k.n2 > 0.0) == (delta > 0.0));
    CHECK(flipped.n2 == -k.n2);
    CHECK(dense.n2 == 2.0 * k.n2);
    CHECK(dense.n0 - 1.0 == doctest::Approx(2.0 * (k.n0 - 1.0)).epsilon(1e-12));
    CHECK(far.n2 == k.n2 / 8.0);
  }
}

TEST_CASE("finite-difference intensity slope agrees with n2") {
  for (double r : {-20.0, -35.0, -100.0, 20.0, 60.0}) {
    const double delta = r * kRb.linewidth;
    const double is = saturation_intensity(kRb, delta);
    const double h = 1e-4 * is;
    const double slope = (-3.0 * index_at(kRb, kNa, delta, 0.0) + 4.0 * index_at(kRb, kNa, delta, h) -
                          index_at(kRb, kNa, delta, 2.0 * h)) / (2.0 * h);
    const double n2 = kerr_coefficients(kRb, kNa, delta).n2;
    CHECK(std::abs(slope / n2 - 1.0) < 0.01);
  }
}

TEST_CASE("saturation intensity") {
  const double delta20 = -20.0 * kRb.linewidth;
  CHECK(saturation_intensity(kRb, delta20) / units::w_per_cm2 == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(saturation_intensity(kRb, 0.0) == 0.0);
  CHECK(saturation_intensity(kRb, -kRb.linewidth) / units::mw_per_cm2 == doctest::Approx(10.0).epsilon(1e-12));
  const double ref = saturation_intensity(kRb, units::mhz_to_rad_per_s(-120.0)) / units::w_per_cm2;
  CHECK(std::abs(ref / 4.0 - 1.0) < 0.1);
}

TEST_CASE("validity flags") {
  const double delta = -20.0 * kRb.linewidth;
  const double is = saturation_intensity(kRb, delta);
  CHECK(validity(kRb, {kNa, delta, 0.1 * is}).far_detuned);
  CHECK(validity(kRb, {kNa, delta, 0.1 * is}).kerr);
  CHECK_FALSE(validity(kRb, {kNa, delta, 0.3 * is}).kerr);
  CHECK_FALSE(validity(kRb, {kNa, -5.0 * kRb.linewidth, 0.0}).far_detuned);
  CHECK(validity(kRb, {kNa, -10.0 * kRb.linewidth, 0.0}).far_detuned);
}

TEST_CASE("feasibility report at the reference point") {
  const VaporConditions c{kNa, units::mhz_to_rad_per_s(-120.0), 0.4 * units::w_per_cm2};
  const FeasibilityReport r = feasibility_report(kRb, c, 780e-9);
  CHECK(std::abs(std::abs(r.delta_n) / 3e-5 - 1.0) < 0.15);
  CHECK(r.intensity_ratio == doctest::Approx(0.1).epsilon(0.1));
  REQUIRE(r.length_scale.has_value());
  CHECK(std::abs(*r.length_scale / units::mm / 26.0 - 1.0) < 0.15);
  CHECK(*r.recommended_length == doctest::Approx(5.0 * *r.length_scale));
  CHECK(r.validity.kerr);
  // Fluid handoff: c_s' = sqrt(|delta n| / n0) in solver units.
  REQUIRE(r.fluid.has_value());
  CHECK(r.fluid->regime == scales::Regime::defocusing);
  CHECK(*r.fluid->cs_single == doctest::Approx(std::sqrt(std::abs(r.delta_n) / r.kerr.n0)).epsilon(1e-10));
  CHECK(r.to_text().find("n2_cm2_per_W: ") != std::string::npos);
}

TEST_CASE("feasibility report without drive") {
  const FeasibilityReport r = feasibility_report(kRb, {kNa, -20.0 * kRb.linewidth, 0.0});
  CHECK(r.delta_n == 0.0);
  CHECK_FALSE(r.length_scale.has_value());
  CHECK(r.to_text().find("length_scale_mm: divergent") != std::string::npos);
}

TEST_CASE("feasibility report flags blue detuning") {
  const FeasibilityReport r = feasibility_report(kRb, {kNa, 20.0 * kRb.linewidth, 0.1 * units::w_per_cm2});
  CHECK(r.kerr.n2 > 0.0);
  CHECK_FALSE(r.fluid.has_value());
  CHECK_FALSE(r.notes.empty());
}

TEST_CASE("detuning scan") {
  const std::vector<double> densities{kNa, 2.0 * kNa};
  const std::vector<double> detunings{-40.0 * kRb.linewidth, -20.0 * kRb.linewidth, 20.0 * kRb.linewidth};
  const auto rows = detuning_scan(kRb, densities, detunings);
  REQUIRE(rows.size() == 6);
  CHECK(rows[1].detuning_over_gamma == doctest::Approx(-20.0));
  CHECK(rows[1].n2 == kerr_coefficients(kRb, kNa, detunings[1]).n2);
  CHECK(rows[1].saturation_intensity / units::w_per_cm2 == doctest::Approx(4.0));
  CHECK(rows[0].n2 == doctest::Approx(rows[1].n2 / 8.0).epsilon(1e-14));
  CHECK(rows[0].saturation_intensity == doctest::Approx(4.0 * rows[1].saturation_intensity));
  CHECK(rows[4].n2 == doctest::Approx(2.0 * rows[1].n2).epsilon(1e-14));
  const std::vector<double> bad{-20.0 * kRb.linewidth, 0.0};
  CHECK_THROWS_AS(detuning_scan(kRb, densities, bad), InvalidArgument);
}

}
