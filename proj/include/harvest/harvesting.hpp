#pragma once

#include <array>
#include <complex>
#include <vector>

#include "harvest/dispersion.hpp"
#include "harvest/quadrature.hpp"
#include "harvest/units.hpp"

namespace harvest {

// Everything in this header is dimensionless: gap in M*, width in 1/M*,
// separation in c0/M*, observables in lambda^2 rho0 / c0^2.

struct DetectorPair {
  double omega_gap = 0.0;
  double sigma = 1.0;
  double separation = 0.0;

  /// Throws InvalidParams unless omega_gap >= 0, sigma > 0, separation >= 0.
  void validate() const;
};

/// Two static detectors on a ring of radius r.
struct PairGeometry {
  double r = 1.0;
  double theta_a = 0.0;
  double theta_b = 0.0;

  /// Chord length 2 r sin(|theta_b - theta_a| / 2).
  double separation() const;
};

struct Estimate {
  double value = 0.0;
  double est_error = 0.0;
};

struct ComplexEstimate {
  std::complex<double> value;
  double est_error = 0.0;
};

struct ObservableErrors {
  double p = 0.0;
  double c = 0.0;
  double x = 0.0;
};

struct HarvestObservables {
  double p_d = 0.0;
  double c_elem = 0.0;
  std::complex<double> x_elem;
  double concurrence = 0.0;
  ObservableErrors est_errors;
};

/// Reduced two-detector state in the basis {gg, ge, eg, ee}.
struct DensityMatrixAB {
  std::array<std::array<std::complex<double>, 4>, 4> m{};

  std::complex<double> trace() const;
  bool hermitian(double tol) const;
};

Estimate transition_probability(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                                const quadrature::QuadratureSpec& spec = {});

/// At zero separation this is the P integral itself, bit for bit.
Estimate correlation_c(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                       const quadrature::QuadratureSpec& spec = {});

/// Nonlocal element. The imaginary part carries a Bessel tail that is only
/// conditionally convergent, so zero separation is rejected.
ComplexEstimate correlation_x(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                              const quadrature::QuadratureSpec& spec = {});

DensityMatrixAB density_matrix(double p, double c, std::complex<double> x);
DensityMatrixAB density_matrix(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                               const quadrature::QuadratureSpec& spec = {});

/// 2 max(0, |X| - P) for identical detectors.
double concurrence_from(double p, std::complex<double> x);
double concurrence(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                   const quadrature::QuadratureSpec& spec = {});

/// P, C, X and concurrence in one call.
HarvestObservables compute_observables(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                           const quadrature::QuadratureSpec& spec = {});

}  // namespace harvest
