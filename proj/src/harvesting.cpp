#include "harvest/harvesting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "harvest/errors.hpp"
#include "harvest/specfun.hpp"

namespace harvest {
namespace {

using quadrature::QuadratureSpec;

constexpr int kMaxBesselBreakpoints = 400;
// The Dawson factor settles into its 1/(2z) tail a few units past its peak;
// the lobe-accelerated tail starts from here.
constexpr double kTailStartLevel = 4.0;
constexpr double kDipolarFeatureEnd = 4.0;

struct Mode {
  double weight;  // x (u+v)^2 = x^2 / (2f)
  double omega;
};

Mode mode(const DimensionlessModel& model, DispersionKind kind, double x) {
  const double f = dispersion::f_factor(model, kind, x);
  return {x * x / (2.0 * f), x * f};
}

void check(const DetectorPair& pair) { pair.validate(); }

double envelope_end(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                    const QuadratureSpec& spec) {
  return dispersion::envelope_cut(model, kind, pair.sigma, spec.envelope_cutoff);
}

Estimate scaled(const quadrature::QuadratureResult& r, double prefactor) {
  return {prefactor * r.value, std::abs(prefactor) * r.est_error};
}

// sigma^2 exp(-Omega^2 sigma^2) int x w exp(-(omega^2 + 2 omega Omega) sigma^2) [J0(xL)] dx
Estimate gaussian_integral(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                           const QuadratureSpec& spec, bool with_bessel) {
  check(pair);
  spec.validate();
  dispersion::require_stable(model, kind);
  const double s2 = pair.sigma * pair.sigma;
  const double gap = pair.omega_gap;
  const double L = pair.separation;
  auto g = [&](double x) {
    if (x == 0.0) return 0.0;
    const Mode md = mode(model, kind, x);
    double v = md.weight * std::exp(-(md.omega * md.omega + 2.0 * md.omega * gap) * s2);
    if (with_bessel) v *= specfun::bessel_j0(x * L);
    return v;
  };
  const double x_cut = envelope_end(model, kind, pair, spec);
  std::vector<double> breaks;
  if (with_bessel) breaks = quadrature::bessel_breakpoints(L, x_cut, kMaxBesselBreakpoints);
  const auto r = quadrature::integrate_decaying(g, x_cut, spec, breaks);
  return scaled(r, s2 * std::exp(-gap * gap * s2));
}

}  // namespace

void DetectorPair::validate() const {
  if (!(omega_gap >= 0) || !std::isfinite(omega_gap) || !(sigma > 0) || !std::isfinite(sigma) || !(separation >= 0) ||
      !std::isfinite(separation)) {
    std::ostringstream os;
    os << "detector pair needs omega_gap >= 0, sigma > 0, separation >= 0 (got " << omega_gap << ", " << sigma << ", "
       << separation << ")";
    throw InvalidParams(os.str());
  }
}

double PairGeometry::separation() const {
  if (!(r > 0)) throw InvalidParams("pair geometry: ring radius must be > 0");
  return 2.0 * r * std::abs(std::sin(0.5 * (theta_b - theta_a)));
}

std::complex<double> DensityMatrixAB::trace() const { return m[0][0] + m[1][1] + m[2][2] + m[3][3]; }

bool DensityMatrixAB::hermitian(double tol) const {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (std::abs(m[i][j] - std::conj(m[j][i])) > tol) return false;
  return true;
}

Estimate transition_probability(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                                const QuadratureSpec& spec) {
  return gaussian_integral(model, kind, pair, spec, false);
}

Estimate correlation_c(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                       const QuadratureSpec& spec) {
  // J0(0) = 1, so share the P integrand exactly rather than multiplying by 1.
  return gaussian_integral(model, kind, pair, spec, pair.separation != 0.0);
}

ComplexEstimate correlation_x(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                              const QuadratureSpec& spec) {
  check(pair);
  spec.validate();
  if (pair.separation == 0.0) {
    throw CoincidentDetectorsUnregularized(
        "X needs separation > 0: its imaginary part diverges for coincident detectors");
  }
  dispersion::require_stable(model, kind);

  const double sigma = pair.sigma;
  const double s2 = sigma * sigma;
  const double L = pair.separation;
  const double front = -s2 * std::exp(-pair.omega_gap * pair.omega_gap * s2);

  // Real part: Gaussian envelope exp(-omega^2 sigma^2).
  auto re = [&](double x) {
    if (x == 0.0) return 0.0;
    const Mode md = mode(model, kind, x);
    return md.weight * std::exp(-md.omega * md.omega * s2) * specfun::bessel_j0(x * L);
  };
  const double x_cut = envelope_end(model, kind, pair, spec);
  const auto re_breaks = quadrature::bessel_breakpoints(L, x_cut, kMaxBesselBreakpoints);
  const Estimate re_part = scaled(quadrature::integrate_decaying(re, x_cut, spec, re_breaks), front);

  // Imaginary part: exp(-z^2) Erfi(z) = (2/sqrt(pi)) D(z), z = sigma omega.
  const bool linear = kind == DispersionKind::LorentzInvariantIdeal;
  auto h = [&](double x) {
    if (x == 0.0) return 0.0;
    const Mode md = mode(model, kind, x);
    const double z = sigma * md.omega;
    if (!linear) return md.weight * specfun::dawson(z);
    // f = 1: weight = x^2/2 and D ~ 1/(2z) leaves a growing x/(4 sigma) piece,
    // removed here and restored through its Abel value below.
    if (z < 2.0) return md.weight * specfun::dawson(z) - x / (4.0 * sigma);
    return md.weight * specfun::dawson_excess(z);
  };
  double x_tail = dispersion::envelope_cut(model, kind, sigma, kTailStartLevel);
  if (kind == DispersionKind::DipolarBogoliubov) x_tail = std::max(x_tail, kDipolarFeatureEnd);
  auto head_integrand = [&](double x) { return h(x) * specfun::bessel_j0(x * L); };
  const auto head_breaks = quadrature::bessel_breakpoints(L, x_tail, kMaxBesselBreakpoints);
  const auto head = quadrature::integrate_interval(head_integrand, 0.0, x_tail, spec, head_breaks);
  const auto tail = quadrature::integrate_bessel_tail(h, L, x_tail, spec);
  double im_sum = head.value + tail.value;
  if (linear) im_sum += quadrature::abel_regularized_linear_tail(1.0 / (4.0 * sigma), L);
  const double im_front = front * 2.0 / kSqrtPi;

  ComplexEstimate out;
  out.value = {re_part.value, im_front * im_sum};
  out.est_error = std::hypot(re_part.est_error, std::abs(im_front) * (head.est_error + tail.est_error));
  return out;
}

DensityMatrixAB density_matrix(double p, double c, std::complex<double> x) {
  DensityMatrixAB rho;
  rho.m[0][0] = 1.0 - 2.0 * p;
  rho.m[0][3] = x;
  rho.m[3][0] = std::conj(x);
  rho.m[1][1] = p;
  rho.m[2][2] = p;
  rho.m[1][2] = c;
  rho.m[2][1] = c;
  return rho;
}

DensityMatrixAB density_matrix(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                               const QuadratureSpec& spec) {
  const HarvestObservables o = compute_observables(model, kind, pair, spec);
  return density_matrix(o.p_d, o.c_elem, o.x_elem);
}

double concurrence_from(double p, std::complex<double> x) { return 2.0 * std::max(0.0, std::abs(x) - p); }

double concurrence(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                   const QuadratureSpec& spec) {
  const Estimate p = transition_probability(model, kind, pair, spec);
  const ComplexEstimate x = correlation_x(model, kind, pair, spec);
  return concurrence_from(p.value, x.value);
}

HarvestObservables compute_observables(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                           const QuadratureSpec& spec) {
  HarvestObservables o;
  const Estimate p = transition_probability(model, kind, pair, spec);
  const Estimate c = correlation_c(model, kind, pair, spec);
  const ComplexEstimate x = correlation_x(model, kind, pair, spec);
  o.p_d = p.value;
  o.c_elem = c.value;
  o.x_elem = x.value;
  o.concurrence = concurrence_from(p.value, x.value);
  o.est_errors = {p.est_error, c.est_error, x.est_error};
  return o;
}

}  // namespace harvest
