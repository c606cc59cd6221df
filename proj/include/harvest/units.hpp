#pragma once

#include <optional>

namespace harvest {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.77245385090551602730;

/// Largest interaction ratio, reached when the dipolar coupling dominates.
inline constexpr double kMaxR = 1.25331413731550025121;  // sqrt(pi/2)

/// Critical chemical potential for the dipole-dominated spectrum. Stored as a
/// constant for gating; dispersion::critical_A recomputes it numerically.
inline constexpr double kCriticalA = 3.4454;

/// R values this close to kMaxR are treated as dipole dominated by the A gate.
inline constexpr double kDipolarDominanceTol = 1e-4;

/// Physical condensate parameters in a consistent unit system with hbar = 1.
struct CondensateParams {
  double m = 0.0;        // atomic mass
  double omega_z = 0.0;  // transverse trap frequency
  double g_c = 0.0;      // contact coupling
  double g_d = 0.0;      // dipolar coupling
  double rho_0 = 0.0;    // 2D density

  void validate() const;
};

/// Quantities with physical units kept alongside the dimensionless model.
struct DerivedScales {
  double c_0 = 0.0;     // sound speed
  double M_star = 0.0;  // Lorentz-violation energy scale m*c_0^2
  double d_z = 0.0;     // transverse oscillator length
  double g_eff = 0.0;   // effective quasi-2D contact coupling
};

/// Dispersion configuration in natural units c_0 = M* = 1.
class DimensionlessModel {
 public:
  /// Throws InvalidParams outside 0 <= R <= sqrt(pi/2), A >= 0, and
  /// StabilityViolation for A > A_c in the dipole-dominated limit.
  static DimensionlessModel create(double R, double A);

  double R() const noexcept { return R_; }
  double A() const noexcept { return A_; }
  bool dipole_dominated() const noexcept { return R_ >= kMaxR - kDipolarDominanceTol; }

  const std::optional<DerivedScales>& scales() const noexcept { return scales_; }
  DimensionlessModel with_scales(const DerivedScales& s) const;

 private:
  DimensionlessModel(double R, double A) : R_(R), A_(A) {}
  double R_;
  double A_;
  std::optional<DerivedScales> scales_;
};

/// Physical parameters to the dimensionless model. g_d = 0 maps to R = 0 and
/// g_c = 0 to R = sqrt(pi/2).
DimensionlessModel nondimensionalize(const CondensateParams& p);

/// Lower bound on omega_z keeping the dipole-dominated spectrum stable.
double min_stable_omega_z(const CondensateParams& p);

}  // namespace harvest
