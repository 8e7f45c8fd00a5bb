#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "photonfluid/fft.hpp"

// Dimensionless paraxial propagation
//
//   i d(psi)/dz = -1/2 lap(psi) + [V0 + g rho] psi,   rho = sum_j |psi_j|^2,
//
// in coordinates rescaled by n k0, on a periodic lattice. A state carries one
// envelope (coherent single field) or two envelopes (two fluids coupled only
// through the total density).

namespace photonfluid::solver {

using cplx = std::complex<double>;
using ComplexField = std::vector<cplx>;
using RealField = std::vector<double>;

struct Grid {
  std::size_t nx = 64;
  std::size_t ny = 64;
  double lx = 1.0;
  double ly = 1.0;
  double dz = 1e-3;

  void validate() const;
  std::size_t size() const { return nx * ny; }
  double dx() const { return lx / static_cast<double>(nx); }
  double dy() const { return ly / static_cast<double>(ny); }
  double cell_area() const { return dx() * dy(); }
  /// Cell coordinates, centred: x_i = (i - nx/2) dx.
  double x(std::size_t i) const { return (static_cast<double>(i) - 0.5 * static_cast<double>(nx)) * dx(); }
  double y(std::size_t j) const { return (static_cast<double>(j) - 0.5 * static_cast<double>(ny)) * dy(); }
  /// Wavenumber of FFT bin i: 2 pi m / l with m in [-n/2, n/2).
  double kx(std::size_t i) const;
  double ky(std::size_t j) const;
  double dkx() const;
  double dky() const;
};

enum class StreamMode {
  single_field,   // psi = sqrt(rho0) (1 + e^{i v0 x}) + noise
  dual_envelope,  // psi_1 = sqrt(rho0) + noise, psi_2 = sqrt(rho0) e^{i v0 x} + noise
};

const char* to_string(StreamMode m);
StreamMode stream_mode_from_string(const std::string& s);

struct FieldState {
  Grid grid;
  double z = 0.0;
  std::vector<ComplexField> envelopes;

  std::size_t envelope_count() const { return envelopes.size(); }
  /// Total density sum_j |psi_j|^2 per cell.
  RealField density() const;
  /// Throws InvalidArgument if envelopes are missing or mis-sized.
  void validate() const;
};

struct RunSpec {
  double g = 0.5;
  std::optional<RealField> potential;  // V0(x, y) per cell, row-major
  double v0 = 0.0;
  double rho0 = 1.0;                   // per-stream background density
  double noise_amplitude = 1e-6;       // RMS relative to sqrt(rho0)
  std::uint64_t noise_seed = 42;
  double z_end = 0.0;
  std::size_t snapshot_every = 100;
  StreamMode mode = StreamMode::dual_envelope;
  bool dealias = false;                // 2/3-rule spectral truncation

  /// Throws InvalidArgument (noise range, snapshot cadence, commensurability).
  void validate(const Grid& grid) const;
};

/// Default step: min(0.1 dx^2, 0.01 / (g rho_max)) with dx the smaller cell size.
double default_dz(const Grid& grid, double g, double rho_max);

/// Nearest commensurate stream speeds 2 pi m / lx bracketing v0.
std::array<double, 2> commensurate_neighbours(double v0, double lx);

/// Two-stream initial state. Noise is white complex Gaussian per cell
/// (mt19937_64 with Box-Muller), stripped of the top 10% of each lattice axis,
/// then scaled to RMS noise_amplitude * sqrt(rho0). Identical inputs yield
/// bit-identical states.
FieldState init_two_stream(const Grid& grid, const RunSpec& spec);

/// Strang split-step propagator: half kinetic (spectral), full nonlinear and
/// potential phase (real space), half kinetic.
class Propagator {
 public:
  Propagator(const Grid& grid, double g, std::optional<RealField> potential = std::nullopt,
             bool dealias = false);

  /// One full Strang step. Throws NonFiniteField on breakdown.
  void step(FieldState& state) const;
  /// n consecutive steps with adjacent kinetic half-steps merged; equal to n
  /// calls of step() up to roundoff.
  void advance(FieldState& state, std::size_t n) const;

  const Grid& grid() const { return grid_; }
  double g() const { return g_; }

 private:
  void kinetic(FieldState& state, std::span<const cplx> multiplier, bool check) const;
  void nonlinear(FieldState& state) const;

  Grid grid_;
  double g_;
  std::optional<RealField> potential_;
  const Fft2d* fft_;
  std::vector<cplx> half_kick_;  // exp(-i k^2 dz / 4) / N, masked
  std::vector<cplx> full_kick_;  // exp(-i k^2 dz / 2) / N, masked
};

/// Convenience single step; builds a propagator each call.
FieldState step(FieldState state, double g, const std::optional<RealField>& potential = std::nullopt);

using Observer = std::function<void(const FieldState&)>;

/// Steps from state.z to state.z + spec.z_end. The step count is
/// ceil(z_end / dz) and the step shrinks so that it lands exactly on z_end.
/// The observer sees the initial state, every snapshot_every-th step and the
/// final state. Snapshots are returned when keep_snapshots is true.
std::vector<FieldState> propagate(FieldState state, const RunSpec& spec,
                                  const Observer& observer = {}, bool keep_snapshots = true);

/// N = sum |psi|^2 dA over all envelopes.
double norm(const FieldState& state);
/// P = sum Im(psi* grad psi) dA with the spectral gradient (Nyquist bin zeroed).
std::array<double, 2> momentum(const FieldState& state);
/// H = sum [1/2 |grad psi|^2 + V0 rho + g/2 rho^2] dA.
double hamiltonian(const FieldState& state, double g,
                   const std::optional<RealField>& potential = std::nullopt);

/// SHA-256 hex digest of z and the raw field bytes.
std::string checksum(const FieldState& state);

}  // namespace photonfluid::solver
