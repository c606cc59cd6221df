#include "harvest/units.hpp"

#include <cmath>
#include <sstream>

#include "harvest/errors.hpp"

namespace harvest {

void CondensateParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidParams(std::string("condensate parameters: ") + what);
  };
  require(std::isfinite(m) && m > 0, "m must be > 0");
  require(std::isfinite(omega_z) && omega_z > 0, "omega_z must be > 0");
  require(std::isfinite(rho_0) && rho_0 > 0, "rho_0 must be > 0");
  require(std::isfinite(g_c) && g_c >= 0, "g_c must be >= 0");
  require(std::isfinite(g_d) && g_d >= 0, "g_d must be >= 0");
  require(g_c + 2 * g_d > 0, "g_c + 2 g_d must be > 0");
}

DimensionlessModel DimensionlessModel::create(double R, double A) {
  if (!std::isfinite(R) || R < 0 || R > kMaxR + 1e-12) {
    std::ostringstream os;
    os << "R = " << R << " outside [0, sqrt(pi/2)]";
    throw InvalidParams(os.str());
  }
  if (!std::isfinite(A) || A < 0) {
    std::ostringstream os;
    os << "A = " << A << " must be >= 0";
    throw InvalidParams(os.str());
  }
  DimensionlessModel model(std::min(R, kMaxR), A);
  if (model.dipole_dominated() && A > kCriticalA) {
    std::ostringstream os;
    os << "A = " << A << " exceeds the critical value A_c = " << kCriticalA
       << " for the dipole-dominated spectrum (R = " << R << "); the quasiparticle spectrum is unstable";
    throw StabilityViolation(os.str());
  }
  return model;
}

DimensionlessModel DimensionlessModel::with_scales(const DerivedScales& s) const {
  DimensionlessModel copy = *this;
  copy.scales_ = s;
  return copy;
}

double min_stable_omega_z(const CondensateParams& p) {
  return 2.0 * p.m * p.g_d * p.g_d * p.rho_0 * p.rho_0 / (kPi * kCriticalA * kCriticalA);
}

DimensionlessModel nondimensionalize(const CondensateParams& p) {
  p.validate();
  const double bound = min_stable_omega_z(p);
  if (p.omega_z < bound) {
    std::ostringstream os;
    os << "omega_z = " << p.omega_z << " below the stability bound 2 m g_d^2 rho_0^2 / (pi A_c^2) = " << bound
       << " (A_c = " << kCriticalA << ")";
    throw StabilityViolation(os.str());
  }

  DerivedScales s;
  s.d_z = std::sqrt(1.0 / (p.m * p.omega_z));
  s.g_eff = (p.g_c + 2 * p.g_d) / (std::sqrt(2 * kPi) * s.d_z);
  s.c_0 = std::sqrt(s.g_eff * p.rho_0 / p.m);
  s.M_star = p.m * s.c_0 * s.c_0;
  const double A = s.g_eff * p.rho_0 / p.omega_z;

  double R = 0.0;
  if (p.g_d > 0) R = (p.g_c == 0) ? kMaxR : kMaxR / (1.0 + p.g_c / (2 * p.g_d));

  return DimensionlessModel::create(R, A).with_scales(s);
}

}  // namespace harvest
