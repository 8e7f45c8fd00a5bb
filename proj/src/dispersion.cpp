#include "photonfluid/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "photonfluid/error.hpp"
#include "photonfluid/parallel.hpp"

namespace photonfluid::dispersion {

namespace {

constexpr double kImagClamp = 1e-12;
constexpr double kPoleRelTol = 1e-10;

bool near_pole(double Q, double beta_eff, cplx W) {
  if (Q == 0.0) return true;
  const double m = 0.25 * Q * Q * Q * Q;
  const cplx d1 = W * W - m;
  const cplx shifted = W - beta_eff * Q;
  const cplx d2 = shifted * shifted - m;
  const double scale = std::max({m, std::norm(W), std::norm(shifted)});
  return std::min(std::abs(d1), std::abs(d2)) <= kPoleRelTol * scale;
}

void flag_poles(RootSet& set, double Q, double beta_eff) {
  for (std::size_t i = 0; i < 4; ++i) set.on_pole[i] = near_pole(Q, beta_eff, set.roots[i]);
}

cplx clamp_imag(cplx z) { return std::abs(z.imag()) < kImagClamp ? cplx{z.real(), 0.0} : z; }

}  // namespace

void ModeQuery::validate() const {
  if (!(Q >= 0.0) || !std::isfinite(Q))
    throw InvalidArgument(fmt::format("wavenumber Q must be finite and >= 0 (got {})", Q));
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw InvalidArgument(fmt::format("Mach number must be finite and >= 0 (got {})", beta));
  if (!(alignment >= -1.0 && alignment <= 1.0))
    throw InvalidArgument(fmt::format("alignment must lie in [-1, 1] (got {})", alignment));
}

std::size_t RootSet::unstable_index() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < 4; ++i)
    if (roots[i].imag() > roots[best].imag()) best = i;
  return best;
}

double RootSet::max_imag() const { return roots[unstable_index()].imag(); }

const char* to_string(FlowRegime r) {
  switch (r) {
    case FlowRegime::subsonic: return "subsonic";
    case FlowRegime::marginal: return "marginal";
    case FlowRegime::supersonic: return "supersonic";
  }
  return "unknown";
}

double bogoliubov(double q, double sound_speed, int sign) {
  if (q < 0.0) throw InvalidArgument(fmt::format("wavenumber must be >= 0 (got {})", q));
  const double w = std::sqrt(sound_speed * sound_speed * q * q + 0.25 * q * q * q * q);
  return sign < 0 ? -w : w;
}

double bogoliubov(double q, int sign) { return bogoliubov(q, 1.0, sign); }

std::pair<double, double> doppler_bogoliubov(double q, double v0, double alignment) {
  const double shift = v0 * q * alignment;
  const double w = bogoliubov(q, +1);
  return {shift - w, shift + w};
}

double inner_minus_radicand(double Q, double beta) {
  const double b2 = beta * beta;
  const double Q2 = Q * Q;
  const double S = 1.0 + 2.0 * b2 + b2 * Q2;
  const double plus = 2.0 + b2 + Q2 + 2.0 * std::sqrt(S);
  // (Q^2 - beta^2)(Q^2 - beta^2 + 4), each factor formed without cancellation
  const double upper = (Q - beta) * (Q + beta);
  const double lower = Q2 - (beta - 2.0) * (beta + 2.0);
  return upper * lower / plus;
}

RootSet two_stream_roots(const ModeQuery& query) {
  query.validate();
  const double Q = query.Q;
  const double beta = query.beta_eff();
  const double b2 = beta * beta;
  const double shift = 0.5 * beta * Q;
  const double half = 0.5 * Q;

  const double r_plus = 2.0 + b2 + Q * Q + 2.0 * std::sqrt(1.0 + 2.0 * b2 + b2 * Q * Q);
  const double r_minus = inner_minus_radicand(Q, beta);

  RootSet set;
  const double a = half * std::sqrt(r_plus);
  set.roots[0] = {shift + a, 0.0};
  set.roots[1] = {shift - a, 0.0};
  if (r_minus >= 0.0) {
    const double b = half * std::sqrt(r_minus);
    set.roots[2] = {shift + b, 0.0};
    set.roots[3] = {shift - b, 0.0};
  } else {
    const double b = half * std::sqrt(-r_minus);
    set.roots[2] = clamp_imag({shift, b});
    set.roots[3] = clamp_imag({shift, -b});
  }
  set.labels = {BranchLabel{+1, +1}, BranchLabel{-1, +1}, BranchLabel{+1, -1}, BranchLabel{-1, -1}};
  flag_poles(set, Q, beta);
  return set;
}

std::pair<double, double> quartic_coefficients(double Q, double beta_eff) {
  const double m = 0.25 * Q * Q * Q * Q;
  const double s = 0.5 * beta_eff * Q;
  const double K = Q * Q;
  const double s2 = s * s;
  return {-(2.0 * m + 2.0 * s2 + K), (s2 - m) * (s2 - m - K)};
}

RootSet two_stream_roots_oracle(const ModeQuery& query) {
  query.validate();
  const double Q = query.Q;
  const double beta = query.beta_eff();
  const auto [c2, c0] = quartic_coefficients(Q, beta);

  // Companion matrix of u^4 + 0 u^3 + c2 u^2 + 0 u + c0.
  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  companion(3, 2) = 1.0;
  companion(0, 3) = -c0;
  companion(2, 3) = -c2;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericError(fmt::format("companion eigenvalue solve failed at Q = {}, beta = {}", Q, beta));

  const auto p = [&](cplx u) { return ((u * u + c2) * u * u) + c0; };
  const auto dp = [&](cplx u) { return (4.0 * u * u + 2.0 * c2) * u; };

  RootSet set;
  const double shift = 0.5 * beta * Q;
  for (int i = 0; i < 4; ++i) {
    cplx u = solver.eigenvalues()[i];
    for (int it = 0; it < 3; ++it) {
      const cplx d = dp(u);
      if (std::abs(d) == 0.0) break;
      const cplx next = u - p(u) / d;
      if (!(std::abs(p(next)) < std::abs(p(u)))) break;
      u = next;
    }
    if (std::abs(u.imag()) < kImagClamp * std::max(1.0, std::abs(u))) u.imag(0.0);
    set.roots[i] = u + shift;
    // Oracle roots carry the outer sign of u; the inner sign is unknown.
    set.labels[i] = BranchLabel{u.real() >= 0.0 ? +1 : -1, 0};
  }
  flag_poles(set, Q, beta);
  return set;
}

Residual dispersion_residual(double Q, double beta_eff, cplx W) {
  const double m = 0.25 * Q * Q * Q * Q;
  const cplx d1 = W * W - m;
  const cplx shifted = W - beta_eff * Q;
  const cplx d2 = shifted * shifted - m;
  Residual r;
  r.min_denominator = std::min(std::abs(d1), std::abs(d2));
  r.value = std::abs(1.0 - 0.5 * Q * Q * (1.0 / d1 + 1.0 / d2));
  return r;
}

double growth_rate(const ModeQuery& query) {
  query.validate();
  const double Q = query.Q;
  const double r_minus = inner_minus_radicand(Q, query.beta_eff());
  if (!(r_minus < 0.0) || Q == 0.0) return 0.0;
  const double g = 0.5 * Q * std::sqrt(-r_minus);
  return g < kImagClamp ? 0.0 : g;
}

StabilityBand unstable_band(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw InvalidArgument(fmt::format("Mach number must be finite and >= 0 (got {})", beta));
  StabilityBand band;
  band.q_hi = beta;
  band.q_lo = beta > 2.0 ? std::sqrt((beta - 2.0) * (beta + 2.0)) : 0.0;
  band.regime = beta < 2.0 ? FlowRegime::subsonic
                           : (beta == 2.0 ? FlowRegime::marginal : FlowRegime::supersonic);
  return band;
}

std::optional<double> resonance_wavenumber(double beta) {
  if (beta < 2.0) return std::nullopt;
  return std::sqrt((beta - 2.0) * (beta + 2.0));
}

MaxGrowth max_growth(double beta) {
  const StabilityBand band = unstable_band(beta);
  MaxGrowth out;
  if (band.empty()) return out;
  const auto negative_growth = [beta](double Q) { return -growth_rate({Q, beta, 1.0}); };
  const auto [Q_star, neg_gamma] = boost::math::tools::brent_find_minima(
      negative_growth, band.q_lo, band.q_hi, std::numeric_limits<double>::digits / 2);
  out.Q_star = Q_star;
  out.gamma_star = -neg_gamma;
  return out;
}

StabilityMap stability_map(std::span<const double> betas, std::span<const double> Qs) {
  const auto monotone = [](std::span<const double> v) {
    return std::is_sorted(v.begin(), v.end()) || std::is_sorted(v.rbegin(), v.rend());
  };
  if (!monotone(betas) || !monotone(Qs)) throw InvalidArgument("stability map grids must be monotone");

  StabilityMap map;
  map.betas.assign(betas.begin(), betas.end());
  map.Qs.assign(Qs.begin(), Qs.end());
  map.growth.assign(betas.size() * Qs.size(), 0.0);
  map.unstable.assign(betas.size() * Qs.size(), 0);

  parallel_for(betas.size(), [&](std::size_t ib) {
    for (std::size_t iq = 0; iq < Qs.size(); ++iq) {
      const double g = growth_rate({Qs[iq], betas[ib], 1.0});
      map.growth[ib * Qs.size() + iq] = g;
      map.unstable[ib * Qs.size() + iq] = g > 0.0 ? 1 : 0;
    }
  });
  return map;
}

}  // namespace photonfluid::dispersion
