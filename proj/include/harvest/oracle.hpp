#pragma once

#include <complex>
#include <string>
#include <vector>

#include "harvest/dispersion.hpp"
#include "harvest/harvesting.hpp"

// Brute-force time-domain evaluation of P, C and X: Gaussian switching
// integrals are done by trapezoid/Filon sums on a grid of proper times, then
// assembled mode by mode with the vacuum Wightman kernel. Slow, test-grade.
namespace harvest::oracle {

/// Which detector is treated as "earlier" in the time-ordered X double integral.
/// Default yields the kernel (1 + i Erfi); the other branch conjugates it.
enum class TimeOrdering { Default, Swapped };

struct OracleGrid {
  double tau_half_width = 8.0;  // switching window, in units of sigma
  int n_tau = 801;              // points across the window
  int n_x = 4000;               // mode grid for P and C
  double x_step = 0.01;         // mode step for X
  double x_max = 2000.0;        // mode cut for X

  void validate() const;
};

/// Trapezoid value of int exp(-tau^2 / (2 sigma^2)) exp(-i a tau) dtau (real by symmetry).
double gaussian_fourier_trapezoid(double a, double sigma, const OracleGrid& grid = {});

enum class PairKernel { Wightman, Unity };

/// Direct 2D trapezoid of chi(t) chi(t') exp(-i gap (t + t')) K(t - t') over the
/// switching window, with K the time-ordered single-mode kernel or K = 1.
std::complex<double> direct_pair_kernel(double sigma, double gap, double omega, PairKernel kernel,
                                        TimeOrdering ordering = TimeOrdering::Default, const OracleGrid& grid = {});

/// Same double integral for the Wightman kernel, evaluated in sum/difference
/// coordinates with a Filon rule for the oscillating difference integral.
std::complex<double> rotated_pair_kernel(double sigma, double gap, double omega,
                                         TimeOrdering ordering = TimeOrdering::Default, const OracleGrid& grid = {});

double wightman_oracle_p(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                         const OracleGrid& grid = {});
double wightman_oracle_c(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                         const OracleGrid& grid = {});
/// Dispersive kinds only; with f = 1 the mode integral does not converge.
std::complex<double> wightman_oracle_x(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                                       TimeOrdering ordering = TimeOrdering::Default, const OracleGrid& grid = {});

struct ValidationPoint {
  std::string label;
  double R;
  double A;
  DispersionKind kind;
  DetectorPair pair;
};

struct ValidationCheck {
  std::string label;
  std::string observable;  // "p", "c" or "x"
  double closed_form;      // |value| for x
  double oracle;
  double rel_error;
  double tolerance;
  bool pass;
};

inline constexpr double kTolP = 1e-4;
inline constexpr double kTolC = 1e-3;
inline constexpr double kTolX = 1e-3;

std::vector<ValidationPoint> preset_points();
std::vector<ValidationCheck> run_validation(const std::vector<ValidationPoint>& points,
                                            const quadrature::QuadratureSpec& spec = {}, const OracleGrid& grid = {});

}  // namespace harvest::oracle
