#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "photonfluid/solver.hpp"

namespace photonfluid::diagnostics {

using solver::cplx;
using solver::FieldState;
using solver::Grid;

/// Madelung variables rho = |psi|^2, v = Im(psi* grad psi) / rho.
struct HydroFields {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> density;
  std::vector<double> vx;
  std::vector<double> vy;
  std::vector<double> phase;       // wrapped arg(psi), for reference only
  std::vector<std::uint8_t> mask;  // 1 where density > floor and v is meaningful
};

/// Spectral-gradient current divided by density. Cells at or below
/// density_floor are masked with v = 0. A floor <= 0 selects 1e-10 * max rho.
HydroFields madelung(const Grid& grid, std::span<const cplx> psi, double density_floor = 0.0);
/// Total density and summed current of all envelopes.
HydroFields madelung(const FieldState& state, double density_floor = 0.0);

/// Real raster, row-major, x fastest.
struct Raster {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[j * nx + i]; }
};

/// |psi_hat(q)|^2 with psi_hat = sqrt(lx ly) / N * FFT(psi), shifted so DC
/// sits at cell (nx/2, ny/2). Satisfies
/// sum(spectrum) * dkx * dky = norm * (2 pi)^2 / (lx ly).
Raster far_field(const Grid& grid, std::span<const cplx> psi);
/// Incoherent sum over envelopes.
Raster far_field(const FieldState& state);

/// Lattice mode (mx, my): q = (2 pi mx / lx, 2 pi my / ly).
struct LatticeMode {
  long mx = 0;
  long my = 0;
};

/// Nearest lattice mode to q; throws InvalidArgument if q is off the lattice
/// by more than tol (relative to the lattice spacing).
LatticeMode lattice_mode(const Grid& grid, std::array<double, 2> q, double tol = 1e-6);

enum class DensityChannel {
  total,       // rho_1 + rho_2 (or |psi|^2 for one envelope)
  difference,  // rho_1 - rho_2, dual envelope only
};

const char* to_string(DensityChannel c);

/// Fourier amplitude A of rho = rho_bar + A e^{i q.r} + c.c. + ...,
/// i.e. (1/N) sum rho e^{-i q.r} over the lattice.
cplx density_mode(const FieldState& state, LatticeMode mode, DensityChannel channel = DensityChannel::total);
/// Mean total density.
double mean_density(const FieldState& state);

struct ModeSample {
  double z = 0.0;
  cplx amplitude;
};

struct ModeHistory {
  std::array<double, 2> q{};
  LatticeMode mode;
  DensityChannel channel = DensityChannel::total;
  double background = 1.0;  // mean total density, reference for relative amplitudes
  std::vector<ModeSample> samples;
};

ModeHistory mode_history(std::span<const FieldState> snapshots, std::array<double, 2> q,
                         DensityChannel channel = DensityChannel::total);

/// Largest relative amplitude max_{q != 0} |A(q)| / rho_bar over the whole
/// lattice (total density).
double peak_mode_amplitude(const FieldState& state);

struct PeakSample {
  double z = 0.0;
  double amplitude = 0.0;  // peak_mode_amplitude
};

/// First z at which the peak relative amplitude exceeds amp_hi: the end of the
/// linear regime for every mode of the run.
std::optional<double> linear_regime_end(std::span<const PeakSample> peaks, double amp_hi);

/// Online counterpart of mode_history for use as a propagation observer.
/// Also tracks peak_mode_amplitude at every observation.
class ModeRecorder {
 public:
  ModeRecorder(const Grid& grid, std::vector<std::array<double, 2>> qs, bool record_difference);
  void operator()(const FieldState& state);
  /// Histories in the order given, total channel first then (optionally)
  /// the difference channel.
  const std::vector<ModeHistory>& histories() const { return histories_; }
  const ModeHistory& total(std::size_t i) const { return histories_[i]; }
  const ModeHistory& difference(std::size_t i) const { return histories_[n_modes_ + i]; }
  const std::vector<PeakSample>& peaks() const { return peaks_; }

 private:
  std::vector<ModeHistory> histories_;
  std::vector<PeakSample> peaks_;
  std::size_t n_modes_;
  bool record_difference_;
};

/// Relative amplitude |A| / background bounds defining the linear regime.
struct GrowthWindow {
  double amp_lo = 1e-5;
  double amp_hi = 1e-2;
  std::optional<double> z_max;  // samples beyond are ignored (see linear_regime_end)
};

struct GrowthFit {
  bool ok = false;
  double gamma = 0.0;
  double uncertainty = 0.0;  // standard error of the slope
  std::size_t samples_used = 0;
  double z_first = 0.0;
  double z_last = 0.0;
  std::string diagnostic;
};

/// Least-squares slope of ln|A| over the samples in the window, from the first
/// entry into [amp_lo, amp_hi] up to the first excursion above amp_hi or
/// z_max. Needs at least five samples; otherwise ok = false with an
/// explanation.
GrowthFit fit_growth_rate(const ModeHistory& history, const GrowthWindow& window = {});

struct FrequencyFit {
  bool ok = false;
  double omega = 0.0;
  std::size_t crossings = 0;
  std::string diagnostic;
};

/// Oscillation frequency of Re A(z) - mean from linearly interpolated zero
/// crossings: omega = pi (n - 1) / (z_last - z_first). Needs 3 crossings.
FrequencyFit fit_frequency(const ModeHistory& history);

struct VortexRecord {
  double x = 0.0;  // plaquette centre, cell units
  double y = 0.0;
  int charge = 0;
};

enum class Boundary { periodic, open };

/// Plaquette winding: for each 2x2 plaquette with all corners above the floor
/// the wrapped phase differences (each in (-pi, pi]) are summed around it;
/// nonzero multiples of 2 pi are recorded. Periodic boundaries include the
/// plaquettes that wrap around the domain.
std::vector<VortexRecord> detect_vortices(const Grid& grid, std::span<const cplx> psi,
                                          double density_floor = 0.0,
                                          Boundary boundary = Boundary::periodic);

/// |psi + A_ref e^{i k_ref . r}|^2 per cell. k_ref must lie on the lattice.
Raster hologram(const Grid& grid, std::span<const cplx> psi, double reference_amplitude,
                std::array<double, 2> reference_k);

/// Fraction sum_{q in band} |A(q)|^2 / rho_bar^2 of density-mode power with
/// |q| * xi strictly inside (Q_lo, Q_hi), over the full lattice.
double band_power(const FieldState& state, double xi, double Q_lo, double Q_hi);

}  // namespace photonfluid::diagnostics
