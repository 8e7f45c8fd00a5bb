#include "photonfluid/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <gsl/gsl_fit.h>

#include "photonfluid/error.hpp"
#include "photonfluid/fft.hpp"

namespace photonfluid::diagnostics {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_field(const Grid& grid, std::span<const cplx> psi) {
  if (psi.size() != grid.size())
    throw InvalidArgument(fmt::format("field has {} cells, grid has {}", psi.size(), grid.size()));
}

bool nyquist(std::size_t i, std::size_t n) {
  return n % 2 == 0 && lattice_index(i, n) == -static_cast<long>(n / 2);
}

// Spectral derivatives of psi along x and y.
std::array<std::vector<cplx>, 2> spectral_gradient(const Grid& grid, std::span<const cplx> psi) {
  const Fft2d& fft = fft_for(grid.nx, grid.ny);
  std::vector<cplx> hat(psi.begin(), psi.end());
  fft.forward(hat);
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  std::vector<cplx> gx(grid.size()), gy(grid.size());
  for (std::size_t j = 0; j < grid.ny; ++j) {
    const double ky = nyquist(j, grid.ny) ? 0.0 : grid.ky(j);
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double kx = nyquist(i, grid.nx) ? 0.0 : grid.kx(i);
      const std::size_t c = j * grid.nx + i;
      gx[c] = cplx{0.0, kx * inv_n} * hat[c];
      gy[c] = cplx{0.0, ky * inv_n} * hat[c];
    }
  }
  fft.backward(gx);
  fft.backward(gy);
  return {std::move(gx), std::move(gy)};
}

HydroFields finish_hydro(std::size_t nx, std::size_t ny, std::vector<double> rho,
                         std::vector<double> jx, std::vector<double> jy, double density_floor) {
  HydroFields h;
  h.nx = nx;
  h.ny = ny;
  double floor = density_floor;
  if (!(floor > 0.0)) floor = 1e-10 * *std::max_element(rho.begin(), rho.end());
  h.mask.assign(rho.size(), 0);
  h.vx.assign(rho.size(), 0.0);
  h.vy.assign(rho.size(), 0.0);
  for (std::size_t c = 0; c < rho.size(); ++c) {
    if (rho[c] > floor) {
      h.mask[c] = 1;
      h.vx[c] = jx[c] / rho[c];
      h.vy[c] = jy[c] / rho[c];
    }
  }
  h.density = std::move(rho);
  return h;
}

std::vector<cplx> plane_wave(const Grid& grid, std::array<double, 2> k, double amplitude) {
  std::vector<cplx> w(grid.size());
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i)
      w[j * grid.nx + i] = std::polar(amplitude, k[0] * grid.x(i) + k[1] * grid.y(j));
  return w;
}

std::vector<double> channel_density(const FieldState& state, DensityChannel channel) {
  if (channel == DensityChannel::total) return state.density();
  if (state.envelopes.size() != 2)
    throw InvalidArgument("difference channel needs a dual-envelope state");
  std::vector<double> d(state.grid.size());
  for (std::size_t c = 0; c < d.size(); ++c)
    d[c] = std::norm(state.envelopes[0][c]) - std::norm(state.envelopes[1][c]);
  return d;
}

}  // namespace

const char* to_string(DensityChannel c) { return c == DensityChannel::total ? "total" : "difference"; }

HydroFields madelung(const Grid& grid, std::span<const cplx> psi, double density_floor) {
  check_field(grid, psi);
  const auto [gx, gy] = spectral_gradient(grid, psi);
  std::vector<double> rho(psi.size()), jx(psi.size()), jy(psi.size()), phase(psi.size());
  for (std::size_t c = 0; c < psi.size(); ++c) {
    rho[c] = std::norm(psi[c]);
    jx[c] = (std::conj(psi[c]) * gx[c]).imag();
    jy[c] = (std::conj(psi[c]) * gy[c]).imag();
    phase[c] = std::arg(psi[c]);
  }
  HydroFields h = finish_hydro(grid.nx, grid.ny, std::move(rho), std::move(jx), std::move(jy), density_floor);
  h.phase = std::move(phase);
  return h;
}

HydroFields madelung(const FieldState& state, double density_floor) {
  state.validate();
  const Grid& grid = state.grid;
  std::vector<double> rho(grid.size(), 0.0), jx(grid.size(), 0.0), jy(grid.size(), 0.0);
  for (const auto& env : state.envelopes) {
    const auto [gx, gy] = spectral_gradient(grid, env);
    for (std::size_t c = 0; c < env.size(); ++c) {
      rho[c] += std::norm(env[c]);
      jx[c] += (std::conj(env[c]) * gx[c]).imag();
      jy[c] += (std::conj(env[c]) * gy[c]).imag();
    }
  }
  HydroFields h = finish_hydro(grid.nx, grid.ny, std::move(rho), std::move(jx), std::move(jy), density_floor);
  h.phase.resize(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) h.phase[c] = std::arg(state.envelopes[0][c]);
  return h;
}

Raster far_field(const Grid& grid, std::span<const cplx> psi) {
  check_field(grid, psi);
  std::vector<cplx> hat(psi.begin(), psi.end());
  fft_for(grid.nx, grid.ny).forward(hat);
  const double n = static_cast<double>(grid.size());
  const double scale = grid.lx * grid.ly / (n * n);
  Raster r{grid.nx, grid.ny, std::vector<double>(grid.size())};
  const long hx = static_cast<long>(grid.nx / 2);
  const long hy = static_cast<long>(grid.ny / 2);
  for (std::size_t j = 0; j < grid.ny; ++j) {
    const auto sj = static_cast<std::size_t>(lattice_index(j, grid.ny) + hy);
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const auto si = static_cast<std::size_t>(lattice_index(i, grid.nx) + hx);
      r.values[sj * grid.nx + si] = std::norm(hat[j * grid.nx + i]) * scale;
    }
  }
  return r;
}

Raster far_field(const FieldState& state) {
  state.validate();
  Raster total = far_field(state.grid, state.envelopes[0]);
  for (std::size_t e = 1; e < state.envelopes.size(); ++e) {
    const Raster r = far_field(state.grid, state.envelopes[e]);
    for (std::size_t c = 0; c < r.values.size(); ++c) total.values[c] += r.values[c];
  }
  return total;
}

LatticeMode lattice_mode(const Grid& grid, std::array<double, 2> q, double tol) {
  const double fx = q[0] / grid.dkx();
  const double fy = q[1] / grid.dky();
  const double mx = std::round(fx);
  const double my = std::round(fy);
  if (std::abs(fx - mx) > tol || std::abs(fy - my) > tol)
    throw InvalidArgument(fmt::format(
        "q = ({}, {}) is not on the wavenumber lattice (nearest index ({}, {}), spacing ({}, {}))",
        q[0], q[1], fx, fy, grid.dkx(), grid.dky()));
  return {static_cast<long>(mx), static_cast<long>(my)};
}

cplx density_mode(const FieldState& state, LatticeMode mode, DensityChannel channel) {
  const Grid& grid = state.grid;
  const std::vector<double> rho = channel_density(state, channel);
  const double qx = grid.dkx() * static_cast<double>(mode.mx);
  const double qy = grid.dky() * static_cast<double>(mode.my);
  std::vector<cplx> ex(grid.nx);
  for (std::size_t i = 0; i < grid.nx; ++i) ex[i] = std::polar(1.0, -qx * grid.x(i));
  cplx sum = 0.0;
  for (std::size_t j = 0; j < grid.ny; ++j) {
    cplx row = 0.0;
    for (std::size_t i = 0; i < grid.nx; ++i) row += rho[j * grid.nx + i] * ex[i];
    sum += row * std::polar(1.0, -qy * grid.y(j));
  }
  return sum / static_cast<double>(grid.size());
}

double mean_density(const FieldState& state) {
  const std::vector<double> rho = state.density();
  double s = 0.0;
  for (double r : rho) s += r;
  return s / static_cast<double>(rho.size());
}

ModeHistory mode_history(std::span<const FieldState> snapshots, std::array<double, 2> q,
                         DensityChannel channel) {
  ModeHistory h;
  h.q = q;
  h.channel = channel;
  if (snapshots.empty()) return h;
  h.mode = lattice_mode(snapshots.front().grid, q);
  h.background = mean_density(snapshots.front());
  for (const auto& s : snapshots) {
    if (!h.samples.empty() && !(s.z > h.samples.back().z))
      throw InvalidArgument("snapshots must have strictly increasing z");
    h.samples.push_back({s.z, density_mode(s, h.mode, channel)});
  }
  return h;
}

ModeRecorder::ModeRecorder(const Grid& grid, std::vector<std::array<double, 2>> qs, bool record_difference)
    : n_modes_(qs.size()), record_difference_(record_difference) {
  const auto add = [&](DensityChannel ch) {
    for (const auto& q : qs) {
      ModeHistory h;
      h.q = q;
      h.mode = lattice_mode(grid, q);
      h.channel = ch;
      histories_.push_back(std::move(h));
    }
  };
  add(DensityChannel::total);
  if (record_difference_) add(DensityChannel::difference);
}

double peak_mode_amplitude(const FieldState& state) {
  const Grid& grid = state.grid;
  const std::vector<double> rho = state.density();
  std::vector<cplx> hat(rho.begin(), rho.end());
  fft_for(grid.nx, grid.ny).forward(hat);
  const double mean = std::abs(hat[0]);
  double peak = 0.0;
  for (std::size_t c = 1; c < hat.size(); ++c) peak = std::max(peak, std::abs(hat[c]));
  return mean > 0.0 ? peak / mean : 0.0;
}

std::optional<double> linear_regime_end(std::span<const PeakSample> peaks, double amp_hi) {
  for (const auto& p : peaks)
    if (p.amplitude > amp_hi) return p.z;
  return std::nullopt;
}

void ModeRecorder::operator()(const FieldState& state) {
  peaks_.push_back({state.z, peak_mode_amplitude(state)});
  const double background = mean_density(state);
  for (auto& h : histories_) {
    if (h.samples.empty()) h.background = background;
    if (h.channel == DensityChannel::difference && state.envelopes.size() != 2) continue;
    h.samples.push_back({state.z, density_mode(state, h.mode, h.channel)});
  }
}

GrowthFit fit_growth_rate(const ModeHistory& history, const GrowthWindow& window) {
  GrowthFit fit;
  if (!(history.background > 0.0)) {
    fit.diagnostic = "background density is not positive";
    return fit;
  }
  // From the first entry into the window until the first excursion above it.
  std::vector<double> zs, logs;
  bool entered = false;
  for (const auto& s : history.samples) {
    if (window.z_max && s.z >= *window.z_max) break;
    const double rel = std::abs(s.amplitude) / history.background;
    if (rel > window.amp_hi) {
      if (entered) break;
      continue;
    }
    if (rel >= window.amp_lo && rel > 0.0) {
      entered = true;
      zs.push_back(s.z);
      logs.push_back(std::log(rel));
    }
  }
  fit.samples_used = zs.size();
  if (zs.size() < 5) {
    fit.diagnostic = fmt::format(
        "only {} samples with relative amplitude in [{:g}, {:g}] (need 5)", zs.size(), window.amp_lo,
        window.amp_hi);
    return fit;
  }
  double c0 = 0.0, c1 = 0.0, cov00 = 0.0, cov01 = 0.0, cov11 = 0.0, sumsq = 0.0;
  gsl_fit_linear(zs.data(), 1, logs.data(), 1, zs.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
  fit.ok = true;
  fit.gamma = c1;
  fit.uncertainty = std::sqrt(std::max(cov11, 0.0));
  fit.z_first = zs.front();
  fit.z_last = zs.back();
  return fit;
}

FrequencyFit fit_frequency(const ModeHistory& history) {
  FrequencyFit fit;
  if (history.samples.size() < 3) {
    fit.diagnostic = "fewer than 3 samples";
    return fit;
  }
  const cplx ref = history.samples.front().amplitude;
  if (std::abs(ref) == 0.0) {
    fit.diagnostic = "initial amplitude is zero";
    return fit;
  }
  const cplx dir = std::conj(ref) / std::abs(ref);
  std::vector<double> crossings;
  double prev_z = history.samples.front().z;
  double prev_s = (history.samples.front().amplitude * dir).real();
  for (std::size_t k = 1; k < history.samples.size(); ++k) {
    const double z = history.samples[k].z;
    const double s = (history.samples[k].amplitude * dir).real();
    if ((prev_s > 0.0 && s <= 0.0) || (prev_s < 0.0 && s >= 0.0))
      crossings.push_back(prev_z + (z - prev_z) * prev_s / (prev_s - s));
    prev_z = z;
    prev_s = s;
  }
  fit.crossings = crossings.size();
  if (crossings.size() < 3) {
    fit.diagnostic = fmt::format("only {} zero crossings (need 3)", crossings.size());
    return fit;
  }
  fit.ok = true;
  fit.omega = std::numbers::pi * static_cast<double>(crossings.size() - 1) /
              (crossings.back() - crossings.front());
  return fit;
}

std::vector<VortexRecord> detect_vortices(const Grid& grid, std::span<const cplx> psi,
                                          double density_floor, Boundary boundary) {
  check_field(grid, psi);
  double floor = density_floor;
  if (!(floor > 0.0)) {
    double max_rho = 0.0;
    for (const auto& c : psi) max_rho = std::max(max_rho, std::norm(c));
    floor = 1e-10 * max_rho;
  }
  const std::size_t nx = grid.nx;
  const std::size_t ny = grid.ny;
  const std::size_t ix_end = boundary == Boundary::periodic ? nx : nx - 1;
  const std::size_t iy_end = boundary == Boundary::periodic ? ny : ny - 1;
  const auto at = [&](std::size_t i, std::size_t j) { return psi[(j % ny) * nx + (i % nx)]; };
  const auto dphi = [](cplx a, cplx b) { return std::arg(b * std::conj(a)); };

  std::vector<VortexRecord> out;
  for (std::size_t j = 0; j < iy_end; ++j) {
    for (std::size_t i = 0; i < ix_end; ++i) {
      const cplx a = at(i, j), b = at(i + 1, j), c = at(i + 1, j + 1), d = at(i, j + 1);
      if (std::norm(a) <= floor || std::norm(b) <= floor || std::norm(c) <= floor || std::norm(d) <= floor)
        continue;
      const double winding = dphi(a, b) + dphi(b, c) + dphi(c, d) + dphi(d, a);
      const int charge = static_cast<int>(std::lround(winding / kTwoPi));
      if (charge != 0)
        out.push_back({static_cast<double>(i) + 0.5, static_cast<double>(j) + 0.5, charge});
    }
  }
  return out;
}

Raster hologram(const Grid& grid, std::span<const cplx> psi, double reference_amplitude,
                std::array<double, 2> reference_k) {
  check_field(grid, psi);
  lattice_mode(grid, reference_k);
  const std::vector<cplx> ref = plane_wave(grid, reference_k, reference_amplitude);
  Raster r{grid.nx, grid.ny, std::vector<double>(grid.size())};
  for (std::size_t c = 0; c < grid.size(); ++c) r.values[c] = std::norm(psi[c] + ref[c]);
  return r;
}

double band_power(const FieldState& state, double xi, double Q_lo, double Q_hi) {
  const Grid& grid = state.grid;
  std::vector<double> rho = state.density();
  std::vector<cplx> hat(rho.begin(), rho.end());
  fft_for(grid.nx, grid.ny).forward(hat);
  const double n = static_cast<double>(grid.size());
  const double mean = hat[0].real() / n;
  double power = 0.0;
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double Q = std::hypot(grid.kx(i), grid.ky(j)) * xi;
      if (Q > Q_lo && Q < Q_hi) power += std::norm(hat[j * grid.nx + i] / n);
    }
  }
  return power / (mean * mean);
}

}  // namespace photonfluid::diagnostics
