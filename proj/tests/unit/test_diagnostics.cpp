#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "photonfluid/diagnostics.hpp"
#include "photonfluid/error.hpp"

using namespace photonfluid;
using namespace photonfluid::diagnostics;
using solver::ComplexField;

namespace {

constexpr double kPi = std::numbers::pi;

Grid square(std::size_t n, double l) {
  Grid g;
  g.nx = g.ny = n;
  g.lx = g.ly = l;
  g.dz = 0.01;
  return g;
}

template <typename F>
ComplexField sample(const Grid& g, F f) {
  ComplexField psi(g.size());
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) psi[j * g.nx + i] = f(g.x(i), g.y(j));
  return psi;
}

FieldState state_of(const Grid& g, ComplexField psi, double z = 0.0) {
  FieldState s;
  s.grid = g;
  s.z = z;
  s.envelopes.push_back(std::move(psi));
  return s;
}

ComplexField random_field(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexField psi(g.size());
  for (auto& c : psi) c = {1.0 + 0.3 * n(rng), 0.3 * n(rng)};
  return psi;
}

// sin(kx) + i sin(ky): +1 vortices at (0,0) and (L/2,L/2), -1 at (L/2,0) and
// (0,L/2); periodic and band-limited.
ComplexField vortex_quartet(const Grid& g, double dx0, double dy0) {
  const double k = 2.0 * kPi / g.lx;
  return sample(g, [&](double x, double y) { return cplx{std::sin(k * (x - dx0)), std::sin(k * (y - dy0))}; });
}

ModeHistory synthetic(std::function<cplx(double)> a, double z0, double z1, std::size_t n) {
  ModeHistory h;
  h.background = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double z = z0 + (z1 - z0) * static_cast<double>(k) / static_cast<double>(n - 1);
    h.samples.push_back({z, a(z)});
  }
  return h;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("madelung of plane and real fields") {
  const Grid g = square(32, 2.0 * kPi);
  const HydroFields h = madelung(g, sample(g, [](double x, double) { return std::polar(1.5, 3.0 * x); }));
  for (std::size_t c = 0; c < g.size(); ++c) {
    CHECK(h.mask[c] == 1);
    CHECK(h.density[c] == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(h.vx[c] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(h.vy[c]) < 1e-12);
  }
  const HydroFields r = madelung(g, sample(g, [](double x, double y) {
    return cplx{2.0 + std::cos(x) * std::sin(y), 0.0};
  }));
  for (std::size_t c = 0; c < g.size(); ++c) {
    CHECK(std::abs(r.vx[c]) < 1e-13);
    CHECK(std::abs(r.vy[c]) < 1e-13);
  }
}

TEST_CASE("madelung of an all-zero field is fully masked") {
  const Grid g = square(16, 1.0);
  const HydroFields h = madelung(g, ComplexField(g.size()));
  for (std::size_t c = 0; c < g.size(); ++c) {
    CHECK(h.mask[c] == 0);
    CHECK(h.vx[c] == 0.0);
    CHECK(h.vy[c] == 0.0);
  }
}

TEST_CASE("madelung velocity of the periodic vortex quartet is exact") {
  const Grid g = square(64, 10.0);
  const double k = 2.0 * kPi / g.lx;
  const ComplexField psi = vortex_quartet(g, 0.0, 0.0);
  const HydroFields h = madelung(g, psi, 1e-6);
  std::size_t checked = 0;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t c = j * g.nx + i;
      if (!h.mask[c]) continue;
      const double sx = std::sin(k * g.x(i)), cx = std::cos(k * g.x(i));
      const double sy = std::sin(k * g.y(j)), cy = std::cos(k * g.y(j));
      const double rho = sx * sx + sy * sy;
      CHECK(h.vx[c] == doctest::Approx(-k * cx * sy / rho).epsilon(1e-9));
      CHECK(h.vy[c] == doctest::Approx(k * sx * cy / rho).epsilon(1e-9));
      ++checked;
    }
  CHECK(checked == g.size() - 4);  // the four cores sit on lattice points
}

TEST_CASE("imprinted vortex has a 1/r azimuthal velocity outside the core") {
  const Grid g = square(128, 64.0);
  const double a = 1.0, R = 20.0;
  // Smooth radial taper makes the field periodic without touching its phase.
  const ComplexField psi = sample(g, [&](double x, double y) {
    const double r2 = x * x + y * y;
    return cplx{x, y} / std::sqrt(r2 + a * a) * std::exp(-std::pow(r2 / (R * R), 4));
  });
  const HydroFields h = madelung(g, psi);
  std::size_t checked = 0;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double x = g.x(i), y = g.y(j), r = std::hypot(x, y);
      if (r < 3.0 * g.dx() || r > 0.75 * R) continue;
      const std::size_t c = j * g.nx + i;
      const double vphi = (-y * h.vx[c] + x * h.vy[c]) / r;
      const double vr = (x * h.vx[c] + y * h.vy[c]) / r;
      CHECK(std::abs(vphi * r - 1.0) < 0.02);
      CHECK(std::abs(vr) < 0.02 / r);
      ++checked;
    }
  CHECK(checked > 1000);
}

TEST_CASE("far field of uniform and two-stream fields") {
  const Grid g = square(16, 5.0);
  const Raster u = far_field(g, ComplexField(g.size(), cplx{1.0, 0.0}));
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      if (i == g.nx / 2 && j == g.ny / 2) CHECK(u.at(i, j) == doctest::Approx(25.0));
      else CHECK(u.at(i, j) < 1e-25);
    }
  const double v0 = 2.0 * kPi * 3.0 / g.lx;
  const Raster two = far_field(g, sample(g, [&](double x, double) { return 1.0 + std::polar(1.0, v0 * x); }));
  CHECK(two.at(g.nx / 2, g.ny / 2) == doctest::Approx(25.0));
  CHECK(two.at(g.nx / 2 + 3, g.ny / 2) == doctest::Approx(25.0));
}

TEST_CASE("Parseval identity of the far field") {
  for (std::size_t n : {16u, 32u, 64u}) {
    Grid g = square(n, 3.7);
    g.ly = 9.1;
    const FieldState s = state_of(g, random_field(g, static_cast<unsigned>(n)));
    const Raster ff = far_field(s);
    double sum = 0.0;
    for (double v : ff.values) sum += v;
    const double lhs = sum * g.dkx() * g.dky();
    const double rhs = solver::norm(s) * 4.0 * kPi * kPi / (g.lx * g.ly);
    CHECK(std::abs(lhs / rhs - 1.0) < 1e-10);
  }
}

TEST_CASE("density modes on the lattice") {
  const Grid g = square(32, 20.0 * kPi);
  CHECK(lattice_mode(g, {0.5, 0.0}).mx == 5);
  CHECK(lattice_mode(g, {-0.3, 0.7}).my == 7);
  CHECK_THROWS_AS(lattice_mode(g, {0.55, 0.0}), InvalidArgument);

  const double eps = 1e-3;
  const FieldState s = state_of(g, sample(g, [&](double x, double) {
    return cplx{std::sqrt(1.0 + 2.0 * eps * std::cos(0.5 * x + 0.3)), 0.0};
  }));
  const cplx A = density_mode(s, lattice_mode(g, {0.5, 0.0}));
  CHECK(std::abs(A) == doctest::Approx(eps).epsilon(1e-12));
  CHECK(std::arg(A) == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(mean_density(s) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(peak_mode_amplitude(s) == doctest::Approx(eps).epsilon(1e-10));
}

TEST_CASE("difference channel needs two envelopes") {
  const Grid g = square(16, 20.0 * kPi);
  const FieldState s = state_of(g, ComplexField(g.size(), 1.0));
  CHECK_THROWS_AS(density_mode(s, {1, 0}, DensityChannel::difference), InvalidArgument);
  FieldState d = s;
  d.envelopes.push_back(sample(g, [](double x, double) { return cplx{std::sqrt(1.0 + 0.02 * std::cos(0.1 * x)), 0.0}; }));
  CHECK(std::abs(density_mode(d, {1, 0}, DensityChannel::difference)) == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(std::abs(density_mode(d, {1, 0}, DensityChannel::total)) == doctest::Approx(0.01).epsilon(1e-10));
}

TEST_CASE("mode history requires increasing z") {
  const Grid g = square(16, 20.0 * kPi);
  std::vector<FieldState> snaps{state_of(g, ComplexField(g.size(), 1.0), 0.0),
                                state_of(g, ComplexField(g.size(), 1.0), 1.0)};
  const ModeHistory h = mode_history(snaps, {0.1, 0.0});
  CHECK(h.samples.size() == 2);
  CHECK(h.background == doctest::Approx(1.0));
  snaps.push_back(state_of(g, ComplexField(g.size(), 1.0), 1.0));
  CHECK_THROWS_AS(mode_history(snaps, {0.1, 0.0}), InvalidArgument);
}

TEST_CASE("growth fit on synthetic exponentials") {
  const ModeHistory h = synthetic([](double z) { return cplx{1e-4 * std::exp(0.3 * z), 0.0}; }, 0.0, 20.0, 41);
  const GrowthFit f = fit_growth_rate(h);
  REQUIRE(f.ok);
  CHECK(std::abs(f.gamma - 0.3) < 1e-12);
  CHECK(f.uncertainty < 1e-12);
  CHECK(f.z_first == 0.0);

  // Known complex frequency: A e^{-i Omega z}, Im Omega = 0.2.
  const cplx omega{0.7, 0.2};
  const ModeHistory c = synthetic([&](double z) { return 2e-5 * std::exp(cplx{0.0, -1.0} * omega * z); }, 0.0, 30.0, 61);
  const GrowthFit fc = fit_growth_rate(c);
  REQUIRE(fc.ok);
  CHECK(std::abs(fc.gamma - 0.2) < 1e-6);
}

TEST_CASE("growth fit window and failure modes") {
  // Leaves the window at z = ln(1e3) / 0.5 ~ 13.8; later samples are ignored
  // even if they fall back inside.
  const ModeHistory h = synthetic([](double z) {
    return cplx{z < 20.0 ? 1e-5 * std::exp(0.5 * z) : 1e-3, 0.0};
  }, 0.0, 30.0, 61);
  const GrowthFit f = fit_growth_rate(h);
  REQUIRE(f.ok);
  CHECK(f.gamma == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(f.z_last < 13.9);

  GrowthWindow w;
  w.z_max = 5.0;
  const GrowthFit cut = fit_growth_rate(h, w);
  CHECK(cut.ok);
  CHECK(cut.z_last < 5.0);

  const ModeHistory few = synthetic([](double z) { return cplx{1e-4 * std::exp(z), 0.0}; }, 0.0, 3.0, 4);
  const GrowthFit nf = fit_growth_rate(few);
  CHECK_FALSE(nf.ok);
  CHECK(nf.diagnostic.find("need 5") != std::string::npos);

  const ModeHistory tiny = synthetic([](double) { return cplx{1e-9, 0.0}; }, 0.0, 3.0, 40);
  CHECK_FALSE(fit_growth_rate(tiny).ok);
}

TEST_CASE("linear regime end from peak amplitudes") {
  std::vector<PeakSample> peaks{{0.0, 1e-6}, {1.0, 1e-4}, {2.0, 5e-3}, {3.0, 2e-2}, {4.0, 1e-3}};
  CHECK(*linear_regime_end(peaks, 1e-2) == 3.0);
  CHECK(*linear_regime_end(peaks, 1e-3) == 2.0);
  CHECK_FALSE(linear_regime_end(peaks, 1.0).has_value());
}

TEST_CASE("frequency fit") {
  const ModeHistory h = synthetic([](double z) { return cplx{1e-3 * std::cos(1.37 * z), 0.0}; }, 0.0, 40.0, 4001);
  const FrequencyFit f = fit_frequency(h);
  REQUIRE(f.ok);
  CHECK(f.omega == doctest::Approx(1.37).epsilon(1e-4));
  const ModeHistory slow = synthetic([](double z) { return cplx{std::cos(0.1 * z), 0.0}; }, 0.0, 10.0, 50);
  CHECK_FALSE(fit_frequency(slow).ok);
}

TEST_CASE("no vortices in a plane wave") {
  const Grid g = square(32, 2.0 * kPi);
  CHECK(detect_vortices(g, sample(g, [](double x, double y) { return std::polar(1.0, 2.0 * x - 3.0 * y); })).empty());
}

TEST_CASE("single imprinted vortex on an open domain") {
  const Grid g = square(32, 32.0);
  const double h = 0.5 * g.dx();
  for (int sign : {+1, -1}) {
    const auto v = detect_vortices(
        g, sample(g, [&](double x, double y) { return cplx{x - h, sign * (y - h)}; }), 0.0, Boundary::open);
    REQUIRE(v.size() == 1);
    CHECK(v[0].charge == sign);
    CHECK(v[0].x == doctest::Approx(16.5));
    CHECK(v[0].y == doctest::Approx(16.5));
  }
}

TEST_CASE("vortex-antivortex pair") {
  const Grid g = square(64, 64.0);
  const double x1 = -10.5, y1 = 3.5, x2 = 12.5, y2 = -7.5;
  const auto v = detect_vortices(g, sample(g, [&](double x, double y) {
    return cplx{x - x1, y - y1} * cplx{x - x2, -(y - y2)};
  }), 0.0, Boundary::open);
  REQUIRE(v.size() == 2);
  int net = 0;
  for (const auto& r : v) {
    net += r.charge;
    const double ex = r.charge > 0 ? x1 : x2, ey = r.charge > 0 ? y1 : y2;
    CHECK(std::abs(r.x - (ex / g.dx() + 32.0)) <= 1.0);
    CHECK(std::abs(r.y - (ey / g.dy() + 32.0)) <= 1.0);
  }
  CHECK(net == 0);
}

TEST_CASE("vortex quartet on a periodic domain") {
  const Grid g = square(32, 10.0);
  const double off = 0.5 * g.dx();
  const auto v = detect_vortices(g, vortex_quartet(g, off, off));
  REQUIRE(v.size() == 4);
  int net = 0;
  for (const auto& r : v) {
    net += r.charge;
    const bool diagonal = (r.x < 16.0) == (r.y < 16.0);
    CHECK(r.charge == (diagonal ? +1 : -1));
  }
  CHECK(net == 0);
}

TEST_CASE("net charge on a periodic domain vanishes") {
  const Grid g = square(32, 10.0);
  for (unsigned seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexField psi(g.size());
    for (auto& c : psi) c = {n(rng), n(rng)};
    const auto v = detect_vortices(g, psi);
    int net = 0;
    for (const auto& r : v) net += r.charge;
    CHECK(!v.empty());
    CHECK(net == 0);
  }
}

TEST_CASE("diagnostics are gauge invariant") {
  const Grid g = square(32, 10.0);
  const ComplexField psi = random_field(g, 3);
  ComplexField rotated = psi;
  for (auto& c : rotated) c *= std::polar(1.0, 1.234);
  const HydroFields a = madelung(g, psi), b = madelung(g, rotated);
  const Raster fa = far_field(g, psi), fb = far_field(g, rotated);
  for (std::size_t c = 0; c < g.size(); ++c) {
    CHECK(std::abs(a.density[c] - b.density[c]) < 1e-12);
    CHECK(std::abs(a.vx[c] - b.vx[c]) < 1e-12);
    CHECK(std::abs(a.vy[c] - b.vy[c]) < 1e-12);
    CHECK(std::abs(fa.values[c] - fb.values[c]) < 1e-12 * std::max(1.0, fa.values[c]));
  }
  const auto va = detect_vortices(g, psi), vb = detect_vortices(g, rotated);
  REQUIRE(va.size() == vb.size());
  for (std::size_t k = 0; k < va.size(); ++k) {
    CHECK(va[k].x == vb[k].x);
    CHECK(va[k].charge == vb[k].charge);
  }
}

TEST_CASE("hologram of empty and plane-wave fields") {
  const Grid g = square(32, 2.0 * kPi);
  const Raster empty = hologram(g, ComplexField(g.size()), 0.7, {2.0, 0.0});
  for (double v : empty.values) CHECK(v == doctest::Approx(0.49).epsilon(1e-14));

  const Raster fringes = hologram(g, sample(g, [](double x, double y) { return std::polar(1.0, 5.0 * x + 1.0 * y); }), 1.0,
                                  {2.0, 0.0});
  // |e^{i k1 r} + e^{i kr r}|^2 = 2 + 2 cos((k1 - kr).r)
  ComplexField hat(fringes.values.begin(), fringes.values.end());
  fft_for(g.nx, g.ny).forward(hat);
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const long mx = lattice_index(i, g.nx), my = lattice_index(j, g.ny);
      const bool expected = (mx == 0 && my == 0) || (mx == 3 && my == 1) || (mx == -3 && my == -1);
      CHECK((std::abs(hat[j * g.nx + i]) > 1e-9) == expected);
    }
  CHECK_THROWS_AS(hologram(g, ComplexField(g.size()), 1.0, {2.5, 0.0}), InvalidArgument);
}

TEST_CASE("hologram of a vortex shows a fork") {
  const Grid g = square(256, 256.0);
  const double h = 0.5 * g.dx();
  const ComplexField psi = sample(g, [&](double x, double y) {
    const cplx w{x - h, y - h};
    return w / std::sqrt(std::norm(w) + 1.0);
  });
  const double kref = 2.0 * kPi * 10.0 / g.lx;
  const Raster holo = hologram(g, psi, 1.0, {kref, 0.0});
  const auto upward_crossings = [&](std::size_t j) {
    std::size_t count = 0;
    double prev = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t c = j * g.nx + i;
      const double fringe = holo.values[c] - std::norm(psi[c]) - 1.0;
      if (i > 0 && prev < 0.0 && fringe >= 0.0) ++count;
      prev = fringe;
    }
    return count;
  };
  const std::size_t above = upward_crossings(g.ny / 2 + 3);
  const std::size_t below = upward_crossings(g.ny / 2 - 3);
  CHECK(above == below + 1);

  // Without the vortex both cuts show the same count.
  const ComplexField flat(g.size(), cplx{1.0, 0.0});
  const Raster plain = hologram(g, flat, 1.0, {kref, 0.0});
  std::size_t a2 = 0, b2 = 0;
  for (std::size_t i = 1; i < g.nx; ++i) {
    const auto up = [&](std::size_t j) {
      return plain.values[j * g.nx + i - 1] < 2.0 && plain.values[j * g.nx + i] >= 2.0;
    };
    a2 += up(g.ny / 2 + 3);
    b2 += up(g.ny / 2 - 3);
  }
  CHECK(a2 == b2);
}

TEST_CASE("band power counts density modes inside the band") {
  const Grid g = square(32, 20.0 * kPi);
  const FieldState s = state_of(g, sample(g, [](double x, double y) {
    return cplx{std::sqrt(1.0 + 0.02 * std::cos(0.5 * x) + 0.04 * std::cos(1.5 * y)), 0.0};
  }));
  // cos(q x) contributes two modes of amplitude eps / 2 each.
  CHECK(band_power(s, 1.0, 0.0, 1.0) == doctest::Approx(2.0 * 0.01 * 0.01).epsilon(1e-9));
  CHECK(band_power(s, 1.0, 1.0, 2.0) == doctest::Approx(2.0 * 0.02 * 0.02).epsilon(1e-9));
  CHECK(band_power(s, 2.0, 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-20));
}

TEST_CASE("a stable wavenumber shows no growth in a subsonic two-stream run") {
  Grid g;
  g.nx = 128;
  g.ny = 8;
  g.lx = 20.0 * kPi;
  g.ly = g.lx / 16.0;
  solver::RunSpec spec;
  spec.v0 = 1.0;
  spec.z_end = 40.0;
  spec.snapshot_every = 10;
  g.dz = solver::default_dz(g, spec.g, 2.0 * spec.rho0);
  FieldState s = solver::init_two_stream(g, spec);
  ModeRecorder rec(g, {{1.5, 0.0}, {0.7, 0.0}}, false);
  solver::propagate(s, spec, std::ref(rec), false);

  // Q = 1.5 is the second harmonic of the fastest modes, so the window stops
  // long before those reach the nonlinear regime.
  const GrowthWindow window{1e-12, 1e-2, linear_regime_end(rec.peaks(), 1e-5).value_or(spec.z_end)};
  const GrowthFit stable = fit_growth_rate(rec.total(0), window);
  REQUIRE(stable.ok);
  CHECK(std::abs(stable.gamma) < 3.0 * stable.uncertainty);
  const GrowthFit unstable = fit_growth_rate(rec.total(1), window);
  REQUIRE(unstable.ok);
  CHECK(unstable.gamma > 10.0 * unstable.uncertainty);
}

}
