#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

// Linear stability of two interpenetrating fluids of light.
//
// Units: wavenumbers are Q = q xi and frequencies are Omega xi^2, with the
// two-fluid length xi = 1 / c_s, c_s = sqrt(2 rho0 g). The single-fluid
// Bogoliubov helpers instead use c_s' = sqrt(g rho0) = 1 (length xi' = 1 / c_s').
//
// Density perturbations exp(i q.r - i Omega z) of a fluid at rest and of a
// fluid streaming at v0 satisfy
//
//   1 - (Q^2 / 2) [ 1 / (W^2 - Q^4/4) + 1 / ((W - beta Q)^2 - Q^4/4) ] = 0,
//
// W = Omega xi^2, beta = v0 / c_s. Writing W = u + s with s = beta Q / 2 and
// clearing both denominators A = (u+s)^2 - m, B = (u-s)^2 - m (m = Q^4/4,
// K = Q^2) gives AB = (K/2)(A + B). Since A + B = 2(u^2 + s^2 - m) and
// AB = (u^2 + s^2 - m)^2 - 4 u^2 s^2, this is the even quartic
//
//   u^4 - u^2 (2m + 2s^2 + K) + (s^2 - m)(s^2 - m - K) = 0,
//
// whose discriminant in u^2 simplifies to Q^4 (1 + 2 beta^2 + beta^2 Q^2).
// Taking square roots gives the closed form
//
//   W = (Q/2) [ beta +- sqrt(2 + beta^2 + Q^2 +- 2 sqrt(1 + 2 beta^2 + beta^2 Q^2)) ].
//
// The inner-minus radicand equals (Q^2 - beta^2)(Q^2 - beta^2 + 4) divided by
// the (positive) inner-plus radicand, so it is negative exactly on the band
// beta^2 - 4 < Q^2 < beta^2.
//
// Non-collinear q and v0 enter only through v0.q, so a general alignment
// cos(angle) is handled as beta_eff = beta * alignment. This goes beyond the
// collinear setting of the original analysis.

namespace photonfluid::dispersion {

using cplx = std::complex<double>;

struct ModeQuery {
  double Q = 0.0;          // q xi
  double beta = 0.0;       // Mach number v0 / c_s
  double alignment = 1.0;  // cos of the angle between v0 and q

  double beta_eff() const { return beta * alignment; }
  /// Throws InvalidArgument on Q < 0, beta < 0 or |alignment| > 1.
  void validate() const;
};

/// (outer, inner) signs of the closed form, each +1 or -1.
struct BranchLabel {
  int outer = 1;
  int inner = 1;
};

struct RootSet {
  std::array<cplx, 4> roots{};
  std::array<BranchLabel, 4> labels{};
  // Root sits on a resonance pole W^2 = Q^4/4 or (W - beta Q)^2 = Q^4/4.
  std::array<bool, 4> on_pole{};

  /// Index of the root with the largest imaginary part (the unstable mode
  /// when one exists).
  std::size_t unstable_index() const;
  double max_imag() const;
};

enum class FlowRegime { subsonic, marginal, supersonic };
const char* to_string(FlowRegime r);

/// Open interval (q_lo, q_hi) of unstable Q.
struct StabilityBand {
  double q_lo = 0.0;
  double q_hi = 0.0;
  FlowRegime regime = FlowRegime::subsonic;

  bool empty() const { return !(q_hi > q_lo); }
  bool contains(double Q) const { return Q > q_lo && Q < q_hi; }
};

/// Single-fluid Bogoliubov branch sign * sqrt(q^2 + q^4/4), q in units of 1/xi'.
double bogoliubov(double q, int sign = +1);
/// Same with an explicit sound speed: sign * sqrt(c^2 q^2 + q^4/4).
double bogoliubov(double q, double sound_speed, int sign);

/// Doppler-shifted Bogoliubov pair v0 q alignment -+ Omega_B, lower branch first.
std::pair<double, double> doppler_bogoliubov(double q, double v0, double alignment = 1.0);

/// Inner-minus radicand in its cancellation-free form; negative exactly inside
/// the unstable band.
double inner_minus_radicand(double Q, double beta);

/// Closed-form roots, ordered (+,+), (-,+), (+,-), (-,-).
RootSet two_stream_roots(const ModeQuery& query);

/// Independent route: eigenvalues of the companion matrix of the even quartic
/// in u, Newton-polished on the quartic, shifted back by beta Q / 2.
RootSet two_stream_roots_oracle(const ModeQuery& query);

/// Coefficients (c2, c0) of u^4 + c2 u^2 + c0.
std::pair<double, double> quartic_coefficients(double Q, double beta_eff);

struct Residual {
  double value = 0.0;            // |1 - (Q^2/2)(1/d1 + 1/d2)|
  double min_denominator = 0.0;  // min(|d1|, |d2|)
};

/// Residual of the two-fluid dispersion relation at root W.
Residual dispersion_residual(double Q, double beta_eff, cplx W);

/// max Im W over the four roots; zero outside the unstable band.
double growth_rate(const ModeQuery& query);

StabilityBand unstable_band(double beta);

/// Lower supersonic band edge: the Q where the stream line W = beta Q / 2
/// meets the Bogoliubov branch sqrt(Q^2 + Q^4/4). Empty for beta < 2.
std::optional<double> resonance_wavenumber(double beta);

struct MaxGrowth {
  std::optional<double> Q_star;  // empty when the band is empty
  double gamma_star = 0.0;
};

/// Fastest-growing wavenumber of the collinear problem.
MaxGrowth max_growth(double beta);

/// Row-major raster over (beta rows, Q columns).
struct StabilityMap {
  std::vector<double> betas;
  std::vector<double> Qs;
  std::vector<double> growth;         // betas.size() * Qs.size()
  std::vector<std::uint8_t> unstable;  // growth > 0

  double growth_at(std::size_t ib, std::size_t iq) const { return growth[ib * Qs.size() + iq]; }
  bool unstable_at(std::size_t ib, std::size_t iq) const {
    return unstable[ib * Qs.size() + iq] != 0;
  }
};

/// Grids must be monotone. Rows may be evaluated in parallel; output does not
/// depend on the scheduling.
StabilityMap stability_map(std::span<const double> betas, std::span<const double> Qs);

}  // namespace photonfluid::dispersion
