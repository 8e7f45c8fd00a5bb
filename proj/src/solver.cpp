#include "photonfluid/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "photonfluid/digest.hpp"
#include "photonfluid/error.hpp"

namespace photonfluid::solver {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

// Uniform in (0, 1] from the top 53 bits.
double unit_open_closed(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
}

ComplexField filtered_noise(const Grid& grid, std::mt19937_64& gen, double rms) {
  ComplexField eta(grid.size());
  for (auto& c : eta) {
    const double r = std::sqrt(-2.0 * std::log(unit_open_closed(gen)));
    const double theta = kTwoPi * unit_open_closed(gen);
    c = {r * std::cos(theta), r * std::sin(theta)};
  }

  const Fft2d& fft = fft_for(grid.nx, grid.ny);
  fft.forward(eta);
  const double cut_x = 0.45 * static_cast<double>(grid.nx);
  const double cut_y = 0.45 * static_cast<double>(grid.ny);
  for (std::size_t j = 0; j < grid.ny; ++j) {
    const bool drop_y = std::abs(static_cast<double>(lattice_index(j, grid.ny))) > cut_y;
    for (std::size_t i = 0; i < grid.nx; ++i) {
      if (drop_y || std::abs(static_cast<double>(lattice_index(i, grid.nx))) > cut_x)
        eta[j * grid.nx + i] = 0.0;
    }
  }
  fft.backward(eta);

  double sum = 0.0;
  for (const auto& c : eta) sum += std::norm(c);
  const double current = std::sqrt(sum / static_cast<double>(eta.size()));
  if (current > 0.0)
    for (auto& c : eta) c *= rms / current;
  return eta;
}

double k_squared(const Grid& grid, std::size_t i, std::size_t j) {
  const double kx = grid.kx(i);
  const double ky = grid.ky(j);
  return kx * kx + ky * ky;
}

bool dealias_drop(const Grid& grid, std::size_t i, std::size_t j) {
  return 3 * std::abs(lattice_index(i, grid.nx)) > static_cast<long>(grid.nx) ||
         3 * std::abs(lattice_index(j, grid.ny)) > static_cast<long>(grid.ny);
}

}  // namespace

void Grid::validate() const {
  if (nx < 8 || ny < 8)
    throw InvalidArgument(fmt::format("grid must have at least 8 cells per axis (got {} x {})", nx, ny));
  if (!finite_positive(lx) || !finite_positive(ly))
    throw InvalidArgument(fmt::format("domain lengths must be positive (got {} x {})", lx, ly));
  if (!finite_positive(dz)) throw InvalidArgument(fmt::format("dz must be positive (got {})", dz));
}

double Grid::dkx() const { return kTwoPi / lx; }
double Grid::dky() const { return kTwoPi / ly; }
double Grid::kx(std::size_t i) const { return dkx() * static_cast<double>(lattice_index(i, nx)); }
double Grid::ky(std::size_t j) const { return dky() * static_cast<double>(lattice_index(j, ny)); }

const char* to_string(StreamMode m) {
  return m == StreamMode::single_field ? "single" : "dual";
}

StreamMode stream_mode_from_string(const std::string& s) {
  if (s == "single" || s == "single_field") return StreamMode::single_field;
  if (s == "dual" || s == "dual_envelope") return StreamMode::dual_envelope;
  throw InvalidArgument(fmt::format("unknown stream mode '{}' (expected single or dual)", s));
}

RealField FieldState::density() const {
  RealField rho(grid.size(), 0.0);
  for (const auto& env : envelopes)
    for (std::size_t c = 0; c < rho.size(); ++c) rho[c] += std::norm(env[c]);
  return rho;
}

void FieldState::validate() const {
  grid.validate();
  if (envelopes.empty() || envelopes.size() > 2)
    throw InvalidArgument(fmt::format("state must hold 1 or 2 envelopes (got {})", envelopes.size()));
  for (const auto& env : envelopes)
    if (env.size() != grid.size())
      throw InvalidArgument(fmt::format("envelope has {} cells, grid has {}", env.size(), grid.size()));
}

std::array<double, 2> commensurate_neighbours(double v0, double lx) {
  const double m = v0 * lx / kTwoPi;
  return {kTwoPi * std::floor(m) / lx, kTwoPi * std::ceil(m) / lx};
}

void RunSpec::validate(const Grid& grid) const {
  grid.validate();
  if (!std::isfinite(g)) throw InvalidArgument("interaction strength g must be finite");
  if (!finite_positive(rho0)) throw InvalidArgument(fmt::format("rho0 must be positive (got {})", rho0));
  if (!(noise_amplitude >= 0.0 && noise_amplitude <= 1e-2))
    throw InvalidArgument(fmt::format("noise amplitude must lie in [0, 1e-2] (got {})", noise_amplitude));
  if (!(z_end >= 0.0) || !std::isfinite(z_end))
    throw InvalidArgument(fmt::format("z_end must be finite and >= 0 (got {})", z_end));
  if (snapshot_every == 0) throw InvalidArgument("snapshot_every must be >= 1");
  if (potential && potential->size() != grid.size())
    throw InvalidArgument(fmt::format("potential has {} cells, grid has {}", potential->size(), grid.size()));

  const double m = v0 * grid.lx / kTwoPi;
  if (!std::isfinite(m) || std::abs(m - std::round(m)) > 1e-9 * std::max(1.0, std::abs(m))) {
    const auto near = commensurate_neighbours(v0, grid.lx);
    throw InvalidArgument(fmt::format(
        "stream speed v0 = {} is not commensurate with lx = {} (v0 lx / 2pi = {}); "
        "nearest periodic choices are {} and {}",
        v0, grid.lx, m, near[0], near[1]));
  }
}

double default_dz(const Grid& grid, double g, double rho_max) {
  const double h = std::min(grid.dx(), grid.dy());
  double dz = 0.1 * h * h;
  if (g * rho_max > 0.0) dz = std::min(dz, 0.01 / (std::abs(g) * rho_max));
  return dz;
}

FieldState init_two_stream(const Grid& grid, const RunSpec& spec) {
  spec.validate(grid);
  const double amp = std::sqrt(spec.rho0);
  ComplexField rest(grid.size(), cplx{amp, 0.0});
  ComplexField moving(grid.size());
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i)
      moving[j * grid.nx + i] = std::polar(amp, spec.v0 * grid.x(i));

  FieldState state;
  state.grid = grid;
  state.z = 0.0;
  if (spec.mode == StreamMode::single_field) {
    ComplexField psi(grid.size());
    for (std::size_t c = 0; c < psi.size(); ++c) psi[c] = rest[c] + moving[c];
    state.envelopes.push_back(std::move(psi));
  } else {
    state.envelopes.push_back(std::move(rest));
    state.envelopes.push_back(std::move(moving));
  }

  if (spec.noise_amplitude > 0.0) {
    std::mt19937_64 gen(spec.noise_seed);
    for (auto& env : state.envelopes) {
      const ComplexField eta = filtered_noise(grid, gen, spec.noise_amplitude * amp);
      for (std::size_t c = 0; c < env.size(); ++c) env[c] += eta[c];
    }
  }
  return state;
}

Propagator::Propagator(const Grid& grid, double g, std::optional<RealField> potential, bool dealias)
    : grid_(grid), g_(g), potential_(std::move(potential)), fft_(&fft_for(grid.nx, grid.ny)) {
  grid_.validate();
  if (potential_ && potential_->size() != grid_.size())
    throw InvalidArgument("potential size does not match grid");
  const double inv_n = 1.0 / static_cast<double>(grid_.size());
  half_kick_.resize(grid_.size());
  full_kick_.resize(grid_.size());
  for (std::size_t j = 0; j < grid_.ny; ++j) {
    for (std::size_t i = 0; i < grid_.nx; ++i) {
      const std::size_t c = j * grid_.nx + i;
      if (dealias && dealias_drop(grid_, i, j)) {
        half_kick_[c] = full_kick_[c] = 0.0;
        continue;
      }
      const double k2 = k_squared(grid_, i, j);
      half_kick_[c] = std::polar(inv_n, -0.25 * k2 * grid_.dz);
      full_kick_[c] = std::polar(inv_n, -0.5 * k2 * grid_.dz);
    }
  }
}

void Propagator::kinetic(FieldState& state, std::span<const cplx> multiplier, bool check) const {
  for (auto& env : state.envelopes) {
    fft_->forward(env);
    double power = 0.0;
    for (std::size_t c = 0; c < env.size(); ++c) {
      env[c] *= multiplier[c];
      if (check) power += std::norm(env[c]);
    }
    if (check && !std::isfinite(power)) throw NonFiniteField(state.z);
    fft_->backward(env);
  }
}

void Propagator::nonlinear(FieldState& state) const {
  const std::size_t n = grid_.size();
  const double dz = grid_.dz;
  double total = 0.0;
  if (state.envelopes.size() == 1) {
    auto& psi = state.envelopes[0];
    for (std::size_t c = 0; c < n; ++c) {
      const double rho = std::norm(psi[c]);
      total += rho;
      const double v = potential_ ? (*potential_)[c] : 0.0;
      psi[c] *= std::polar(1.0, -(v + g_ * rho) * dz);
    }
  } else {
    for (std::size_t c = 0; c < n; ++c) {
      double rho = 0.0;
      for (const auto& env : state.envelopes) rho += std::norm(env[c]);
      total += rho;
      const double v = potential_ ? (*potential_)[c] : 0.0;
      const cplx phase = std::polar(1.0, -(v + g_ * rho) * dz);
      for (auto& env : state.envelopes) env[c] *= phase;
    }
  }
  if (!std::isfinite(total)) throw NonFiniteField(state.z + dz);
}

void Propagator::step(FieldState& state) const { advance(state, 1); }

void Propagator::advance(FieldState& state, std::size_t n) const {
  if (n == 0) return;
  if (state.grid.nx != grid_.nx || state.grid.ny != grid_.ny)
    throw InvalidArgument("state grid does not match propagator grid");
  const double z0 = state.z;
  kinetic(state, half_kick_, false);
  for (std::size_t k = 0; k < n; ++k) {
    state.z = z0 + static_cast<double>(k) * grid_.dz;
    nonlinear(state);
    if (k + 1 < n) kinetic(state, full_kick_, false);
  }
  state.z = z0 + static_cast<double>(n) * grid_.dz;
  kinetic(state, half_kick_, true);
}

FieldState step(FieldState state, double g, const std::optional<RealField>& potential) {
  state.validate();
  Propagator(state.grid, g, potential).step(state);
  return state;
}

std::vector<FieldState> propagate(FieldState state, const RunSpec& spec, const Observer& observer,
                                  bool keep_snapshots) {
  state.validate();
  spec.validate(state.grid);

  std::vector<FieldState> snapshots;
  const auto emit = [&](const FieldState& s) {
    if (observer) observer(s);
    if (keep_snapshots) snapshots.push_back(s);
  };
  emit(state);
  if (spec.z_end == 0.0) return snapshots;

  const auto steps = static_cast<std::size_t>(std::ceil(spec.z_end / state.grid.dz - 1e-9));
  Grid grid = state.grid;
  grid.dz = spec.z_end / static_cast<double>(steps);
  state.grid = grid;
  const Propagator prop(grid, spec.g, spec.potential, spec.dealias);

  const double z0 = state.z;
  std::size_t done = 0;
  while (done < steps) {
    const std::size_t chunk = std::min(spec.snapshot_every, steps - done);
    prop.advance(state, chunk);
    done += chunk;
    state.z = z0 + static_cast<double>(done) * grid.dz;
    emit(state);
  }
  return snapshots;
}

double norm(const FieldState& state) {
  double sum = 0.0;
  for (const auto& env : state.envelopes)
    for (const auto& c : env) sum += std::norm(c);
  return sum * state.grid.cell_area();
}

namespace {

// Spectral sums (dA / N) sum_k w(k) |psi_k|^2 over all envelopes.
template <typename Weight>
double spectral_sum(const FieldState& state, Weight weight) {
  const Grid& grid = state.grid;
  const Fft2d& fft = fft_for(grid.nx, grid.ny);
  double sum = 0.0;
  ComplexField work;
  for (const auto& env : state.envelopes) {
    work = env;
    fft.forward(work);
    for (std::size_t j = 0; j < grid.ny; ++j)
      for (std::size_t i = 0; i < grid.nx; ++i) sum += weight(i, j) * std::norm(work[j * grid.nx + i]);
  }
  return sum * grid.cell_area() / static_cast<double>(grid.size());
}

bool nyquist(std::size_t i, std::size_t n) {
  return n % 2 == 0 && lattice_index(i, n) == -static_cast<long>(n / 2);
}

}  // namespace

std::array<double, 2> momentum(const FieldState& state) {
  const Grid& grid = state.grid;
  const double px = spectral_sum(state, [&](std::size_t i, std::size_t) {
    return nyquist(i, grid.nx) ? 0.0 : grid.kx(i);
  });
  const double py = spectral_sum(state, [&](std::size_t, std::size_t j) {
    return nyquist(j, grid.ny) ? 0.0 : grid.ky(j);
  });
  return {px, py};
}

double hamiltonian(const FieldState& state, double g, const std::optional<RealField>& potential) {
  const Grid& grid = state.grid;
  const double kinetic =
      0.5 * spectral_sum(state, [&](std::size_t i, std::size_t j) { return k_squared(grid, i, j); });
  const RealField rho = state.density();
  double local = 0.0;
  for (std::size_t c = 0; c < rho.size(); ++c) {
    const double v = potential ? (*potential)[c] : 0.0;
    local += v * rho[c] + 0.5 * g * rho[c] * rho[c];
  }
  return kinetic + local * grid.cell_area();
}

std::string checksum(const FieldState& state) {
  Sha256 sha;
  sha.update(std::as_bytes(std::span(&state.z, 1)));
  for (const auto& env : state.envelopes) sha.update(std::as_bytes(std::span(env)));
  return sha.hex();
}

}  // namespace photonfluid::solver
