#include "harvest/oracle.hpp"

#include <cmath>
#include <sstream>

#include "harvest/errors.hpp"
#include "harvest/specfun.hpp"

namespace harvest::oracle {
namespace {

using cd = std::complex<double>;

constexpr double kDipolarFeatureEnd = 4.0;

std::vector<double> switching_samples(double sigma, const OracleGrid& grid, double& tau0, double& h) {
  const double half = grid.tau_half_width * sigma;
  h = 2.0 * half / (grid.n_tau - 1);
  tau0 = -half;
  std::vector<double> chi(grid.n_tau);
  for (int j = 0; j < grid.n_tau; ++j) {
    const double t = tau0 + j * h;
    chi[j] = std::exp(-t * t / (2.0 * sigma * sigma));
  }
  return chi;
}

double trapezoid_weight(int j, int n) { return (j == 0 || j == n - 1) ? 0.5 : 1.0; }

// Mode grid end for Gaussian-suppressed integrands: sigma * omega reaches the
// window's own resolution depth.
double mode_end(const DimensionlessModel& model, DispersionKind kind, double sigma, const OracleGrid& grid) {
  double x = dispersion::envelope_cut(model, kind, sigma, grid.tau_half_width + 1.0);
  if (kind == DispersionKind::DipolarBogoliubov) x = std::max(x, kDipolarFeatureEnd);
  return x;
}

double mode_weight(const DimensionlessModel& model, DispersionKind kind, double x, double& omega) {
  const double f = dispersion::f_factor(model, kind, x);
  omega = x * f;
  return x * x / (2.0 * f);
}

// int_0^h (1 - u/h) e^{i theta u/h} du / h
cd filon_end_weight(double theta) {
  if (std::abs(theta) < 1e-3) return {0.5 - theta * theta / 24.0, theta / 6.0};
  const cd e = std::polar(1.0, theta);
  return cd(0.0, 1.0 / theta) - (e - 1.0) / (theta * theta);
}

double sinc(double t) { return std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t; }

// Precomputed sum/difference-coordinate data for one sigma.
struct Rotated {
  double h;
  std::vector<double> g;  // exp(-u^2 / (4 sigma^2)) on u in [0, 2W]
  double s_integral;      // int exp(-s^2/(4 sigma^2)) cos(gap s) ds by trapezoid
};

Rotated make_rotated(double sigma, double gap, const OracleGrid& grid) {
  Rotated r;
  const double span = 2.0 * grid.tau_half_width * sigma;
  const int n = grid.n_tau;
  r.h = span / (n - 1);
  r.g.resize(n);
  for (int j = 0; j < n; ++j) {
    const double u = j * r.h;
    r.g[j] = std::exp(-u * u / (4.0 * sigma * sigma));
  }
  // Symmetric in s: twice the half-line trapezoid minus the double-counted origin.
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += trapezoid_weight(j, n) * r.g[j] * std::cos(gap * j * r.h);
  r.s_integral = 2.0 * s * r.h;
  return r;
}

// 2 int_0^{2W} g(u) e^{+i omega u} du with piecewise-linear g (Filon).
cd difference_integral(const Rotated& r, double omega) {
  const int n = static_cast<int>(r.g.size());
  const double theta = omega * r.h;
  const cd z = std::polar(1.0, theta);
  cd zj = z;
  cd interior = 0.0;
  for (int j = 1; j < n - 1; ++j) {
    interior += r.g[j] * zj;
    zj *= z;
  }
  const double sc = sinc(0.5 * theta);
  const cd end0 = filon_end_weight(theta);
  const cd endn = std::conj(end0) * std::polar(1.0, theta * (n - 1));
  return 2.0 * r.h * (r.g[0] * end0 + sc * sc * interior + r.g[n - 1] * endn);
}

}  // namespace

void OracleGrid::validate() const {
  if (!(tau_half_width >= 6.0) || n_tau < 400 || n_x < 2000 || !(x_step > 0) || !(x_max > x_step)) {
    throw InvalidParams("oracle grid: need tau_half_width >= 6, n_tau >= 400, n_x >= 2000, 0 < x_step < x_max");
  }
}

double gaussian_fourier_trapezoid(double a, double sigma, const OracleGrid& grid) {
  grid.validate();
  double tau0 = 0.0;
  double h = 0.0;
  const auto chi = switching_samples(sigma, grid, tau0, h);
  double sum = 0.0;
  for (int j = 0; j < grid.n_tau; ++j) sum += trapezoid_weight(j, grid.n_tau) * chi[j] * std::cos(a * (tau0 + j * h));
  return sum * h;
}

cd direct_pair_kernel(double sigma, double gap, double omega, PairKernel kernel, TimeOrdering ordering,
                      const OracleGrid& grid) {
  grid.validate();
  double tau0 = 0.0;
  double h = 0.0;
  const auto chi = switching_samples(sigma, grid, tau0, h);
  const double sign = ordering == TimeOrdering::Default ? 1.0 : -1.0;
  const int n = grid.n_tau;
  cd sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double tj = tau0 + j * h;
    for (int k = 0; k < n; ++k) {
      const double tk = tau0 + k * h;
      const double w = trapezoid_weight(j, n) * trapezoid_weight(k, n) * chi[j] * chi[k];
      cd kern = 1.0;
      if (kernel == PairKernel::Wightman) kern = std::polar(1.0, sign * omega * std::abs(tj - tk));
      sum += w * std::polar(1.0, -gap * (tj + tk)) * kern;
    }
  }
  return sum * h * h;
}

cd rotated_pair_kernel(double sigma, double gap, double omega, TimeOrdering ordering, const OracleGrid& grid) {
  grid.validate();
  const Rotated r = make_rotated(sigma, gap, grid);
  // dtau dtau' = ds du / 2
  const cd t = 0.5 * r.s_integral * difference_integral(r, omega);
  return ordering == TimeOrdering::Default ? t : std::conj(t);
}

double wightman_oracle_p(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                         const OracleGrid& grid) {
  pair.validate();
  grid.validate();
  const double x_end = mode_end(model, kind, pair.sigma, grid);
  const double dx = x_end / (grid.n_x - 1);
  double sum = 0.0;
  for (int i = 1; i < grid.n_x; ++i) {
    const double x = i * dx;
    double w = 0.0;
    const double weight = mode_weight(model, kind, x, w);
    const double F = gaussian_fourier_trapezoid(w + pair.omega_gap, pair.sigma, grid);
    sum += trapezoid_weight(i, grid.n_x) * weight * F * F;
  }
  return sum * dx / (2.0 * kPi);
}

double wightman_oracle_c(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                         const OracleGrid& grid) {
  pair.validate();
  grid.validate();
  double tau0 = 0.0;
  double h = 0.0;
  const auto chi = switching_samples(pair.sigma, grid, tau0, h);
  const int n = grid.n_tau;
  // sum_{j,k} c_j c_k e^{-i a (t_j - t_k)} only depends on j - k.
  std::vector<double> wchi(n);
  for (int j = 0; j < n; ++j) wchi[j] = trapezoid_weight(j, n) * chi[j];
  std::vector<double> autocorr(n, 0.0);
  for (int m = 0; m < n; ++m)
    for (int j = m; j < n; ++j) autocorr[m] += wchi[j] * wchi[j - m];

  const double x_end = mode_end(model, kind, pair.sigma, grid);
  const double dx = x_end / (grid.n_x - 1);
  double sum = 0.0;
  for (int i = 1; i < grid.n_x; ++i) {
    const double x = i * dx;
    double w = 0.0;
    const double weight = mode_weight(model, kind, x, w);
    const double a = w + pair.omega_gap;
    double k = autocorr[0];
    for (int m = 1; m < n; ++m) k += 2.0 * autocorr[m] * std::cos(a * m * h);
    sum += trapezoid_weight(i, grid.n_x) * weight * specfun::bessel_j0(x * pair.separation) * k * h * h;
  }
  return sum * dx / (2.0 * kPi);
}

cd wightman_oracle_x(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                     TimeOrdering ordering, const OracleGrid& grid) {
  pair.validate();
  grid.validate();
  if (kind == DispersionKind::LorentzInvariantIdeal)
    throw InvalidParams("time-domain X oracle needs a dispersive kind (contact or dipolar)");
  if (!(pair.separation > 0)) throw CoincidentDetectorsUnregularized("time-domain X oracle needs separation > 0");
  const Rotated r = make_rotated(pair.sigma, pair.omega_gap, grid);
  const int n_modes = static_cast<int>(std::llround(grid.x_max / grid.x_step)) + 1;
  cd sum = 0.0;
  for (int i = 1; i < n_modes; ++i) {
    const double x = i * grid.x_step;
    double w = 0.0;
    const double weight = mode_weight(model, kind, x, w);
    const cd t = 0.5 * r.s_integral * difference_integral(r, w);
    sum += trapezoid_weight(i, n_modes) * weight * specfun::bessel_j0(x * pair.separation) * t;
  }
  cd x_elem = -sum * grid.x_step / (2.0 * kPi);
  return ordering == TimeOrdering::Default ? x_elem : std::conj(x_elem);
}

std::vector<ValidationPoint> preset_points() {
  return {
      {"contact sigma=2 gap=1 L=2", 0.0, 1.0, DispersionKind::ContactBogoliubov, {1.0, 2.0, 2.0}},
      {"contact sigma=1 gap=0.5 L=1.5", 0.0, 1.0, DispersionKind::ContactBogoliubov, {0.5, 1.0, 1.5}},
      {"dipolar R=sqrt(pi/2) A=2 sigma=1 gap=0.5 L=1", kMaxR, 2.0, DispersionKind::DipolarBogoliubov, {0.5, 1.0, 1.0}},
  };
}

std::vector<ValidationCheck> run_validation(const std::vector<ValidationPoint>& points,
                                            const quadrature::QuadratureSpec& spec, const OracleGrid& grid) {
  std::vector<ValidationCheck> out;
  auto add = [&out](const std::string& label, const char* obs, double closed, double oracle, double err, double tol) {
    out.push_back({label, obs, closed, oracle, err, tol, err <= tol});
  };
  for (const ValidationPoint& pt : points) {
    const auto model = DimensionlessModel::create(pt.R, pt.A);
    const double p = transition_probability(model, pt.kind, pt.pair, spec).value;
    const double po = wightman_oracle_p(model, pt.kind, pt.pair, grid);
    add(pt.label, "p", p, po, std::abs(p - po) / std::abs(po), kTolP);

    const double c = correlation_c(model, pt.kind, pt.pair, spec).value;
    const double co = wightman_oracle_c(model, pt.kind, pt.pair, grid);
    add(pt.label, "c", c, co, std::abs(c - co) / std::abs(co), kTolC);

    if (pt.kind != DispersionKind::LorentzInvariantIdeal && pt.pair.separation > 0) {
      const cd x = correlation_x(model, pt.kind, pt.pair, spec).value;
      const cd xo = wightman_oracle_x(model, pt.kind, pt.pair, TimeOrdering::Default, grid);
      add(pt.label, "x", std::abs(x), std::abs(xo), std::abs(x - xo) / std::abs(xo), kTolX);
    }
  }
  return out;
}

}  // namespace harvest::oracle
