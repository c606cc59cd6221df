#pragma once

namespace harvest::specfun {

struct SpecFunResult {
  double value = 0.0;
  double est_abs_error = 0.0;
};

/// Scaled complementary error function exp(x^2) erfc(x) for x >= 0.
double erfcx(double x);

/// Dawson integral exp(-z^2) * int_0^z exp(t^2) dt for z >= 0.
double dawson(double z);

/// D(z) - 1/(2z) for z > 0, computed without cancellation at large z.
double dawson_excess(double z);

/// Bessel functions of the first kind, orders 0 and 1, for x >= 0.
double bessel_j0(double x);
double bessel_j1(double x);

/// n-th positive zero of J0, n >= 1.
double j0_zero(int n);

// Same values paired with the accuracy bound the implementation guarantees.
SpecFunResult erfcx_result(double x);
SpecFunResult dawson_result(double z);
SpecFunResult bessel_j0_result(double x);

}  // namespace harvest::specfun
