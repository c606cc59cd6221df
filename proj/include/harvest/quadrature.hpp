#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace harvest::quadrature {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
  int tail_lobes = 60;
  double envelope_cutoff = 8.0;  // Gaussian standard deviations kept

  /// Throws InvalidParams unless every field is positive and rel_tol >= 1e-13.
  void validate() const;
};

enum class Method { Adaptive, LobeAccelerated, AbelRegularized };
std::string_view to_string(Method m);

struct QuadratureResult {
  double value = 0.0;
  double est_error = 0.0;
  long evaluations = 0;
  double truncation_x = 0.0;
  Method method = Method::Adaptive;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Optional interior
/// breakpoints seed the initial partition.
QuadratureResult integrate_interval(const Integrand& g, double a, double b, const QuadratureSpec& spec,
                                    std::span<const double> breakpoints = {});

/// Integrates g over [0, x_cut] where x_cut sits far enough out on a Gaussian
/// envelope that the remainder is below abs_tol.
QuadratureResult integrate_decaying(const Integrand& g, double x_cut, const QuadratureSpec& spec,
                                    std::span<const double> breakpoints = {});

/// int_{x_start}^inf h(x) J0(x L) dx, summed lobe by lobe between scaled J0
/// zeros with Euler acceleration of the alternating lobe series. h must have a
/// monotone envelope beyond x_start.
QuadratureResult integrate_bessel_tail(const Integrand& h, double L, double x_start, const QuadratureSpec& spec);

/// Abel value of c * int_0^inf x J0(x L) dx, i.e. the eta -> 0 limit of
/// c * eta / (L^2 + eta^2)^(3/2). Always zero; L must be > 0.
double abel_regularized_linear_tail(double c, double L);

/// Scaled J0 zeros j0_zero(n)/L that fall strictly inside (0, x_max).
std::vector<double> bessel_breakpoints(double L, double x_max, int max_count);

}  // namespace harvest::quadrature
