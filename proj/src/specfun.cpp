#include "harvest/specfun.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "harvest/errors.hpp"
#include "harvest/units.hpp"

namespace harvest::specfun {
namespace {

void require_nonnegative(double x, const char* fn) {
  if (!(x >= 0)) {
    std::ostringstream os;
    os << fn << ": argument " << x << " must be >= 0";
    throw DomainError(os.str());
  }
}

constexpr double kTwoOverSqrtPi = 2.0 / kSqrtPi;

// exp(x^2) - (2/sqrt(pi)) sum 2^n x^(2n+1) / (2n+1)!!, all terms positive.
double erfcx_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= 2.0 * x2 / (2 * n + 1);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(x2) - kTwoOverSqrtPi * sum;
}

// Even contraction of the Laplace continued fraction for erfc, evaluated
// bottom-up with a depth that grows as the convergence slows near the seam.
double erfcx_continued_fraction(double x) {
  const double y = 2.0 * x * x;
  const int depth = 20 + static_cast<int>(160.0 / (x * x));
  double t = 0.0;
  for (int k = depth; k >= 1; --k) t = (2.0 * k - 1) * (2.0 * k) / (y + 4.0 * k + 1 - t);
  return 2.0 * x / (y + 1 - t) / kSqrtPi;
}

constexpr double kErfcxSeam = 1.5;

// Dawson: Taylor series near zero, Rybicki's sampling sum in the middle and
// the asymptotic series beyond kDawsonAsym.
constexpr double kDawsonSeries = 0.5;
constexpr double kDawsonAsym = 12.0;
constexpr double kRybickiH = 0.25;
constexpr int kRybickiTerms = 14;  // odd offsets +-1 .. +-27

double dawson_series(double z) {
  const double z2 = z * z;
  double term = z;
  double sum = z;
  for (int n = 1; n < 60; ++n) {
    term *= -2.0 * z2 / (2 * n + 1);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

struct RybickiTable {
  std::array<double, kRybickiTerms> gauss{};  // exp(-(k h)^2), k = 1, 3, 5, ...
  RybickiTable() {
    for (int i = 0; i < kRybickiTerms; ++i) {
      const double kh = (2 * i + 1) * kRybickiH;
      gauss[i] = std::exp(-kh * kh);
    }
  }
};

double dawson_rybicki(double z) {
  static const RybickiTable table;
  const int n0 = 2 * static_cast<int>(std::lround(0.5 * z / kRybickiH));
  const double xp = z - n0 * kRybickiH;
  const double e1 = std::exp(2.0 * xp * kRybickiH);
  const double e2 = e1 * e1;
  double up = e1;
  double down = 1.0 / e1;
  double sum = 0.0;
  for (int i = 0; i < kRybickiTerms; ++i) {
    const int k = 2 * i + 1;
    sum += table.gauss[i] * (up / (n0 + k) - down / (k - n0));
    up *= e2;
    down /= e2;
  }
  return std::exp(-xp * xp) * sum / kSqrtPi;
}

// sum_{n>=1} (2n-1)!! / (2 z^2)^n, the asymptotic excess of 2z D(z) over 1.
double dawson_asymptotic_excess(double z) {
  const double r = 1.0 / (2.0 * z * z);
  double term = 1.0;
  double sum = 0.0;
  for (int n = 1; n < 40; ++n) {
    const double next = term * (2 * n - 1) * r;
    if (next > term && n > 1) break;
    term = next;
    sum += term;
    if (term < 1e-18) break;
  }
  return sum;
}

// Hankel asymptotic form for order nu in {0, 1}, x >= kBesselAsym.
double bessel_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  const double inv8x = 1.0 / (8.0 * x);
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double prev = 1e300;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1;
    term *= (mu - odd * odd) * inv8x / k;
    if (std::abs(term) > prev) break;
    prev = std::abs(term);
    if (k % 2 == 1) {
      q += (k % 4 == 1) ? term : -term;
    } else {
      p += (k % 4 == 2) ? -term : term;
    }
    if (prev < 1e-18) break;
  }
  // cos(x - pi/4 - nu pi/2) and sin(...) expanded so x is never reduced against an
  // inexact pi/4.
  const double c = std::cos(x);
  const double s = std::sin(x);
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  double cos_chi = (c + s) * inv_sqrt2;
  double sin_chi = (s - c) * inv_sqrt2;
  if (nu == 1) {
    const double tmp = cos_chi;
    cos_chi = sin_chi;
    sin_chi = -tmp;
  }
  return std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
}

constexpr double kBesselSeries = 8.0;
constexpr double kBesselAsym = 25.0;

double j0_series(double x) {
  const double y = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    term *= y / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

double j1_series(double x) {
  const double y = -0.25 * x * x;
  double term = 0.5 * x;
  double sum = term;
  for (int k = 1; k < 80; ++k) {
    term *= y / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

// Miller's backward recurrence normalised by J0 + 2 sum J_2k = 1.
void bessel_miller(double x, double& j0, double& j1) {
  int start = static_cast<int>(x) + 30 + static_cast<int>(std::sqrt(40.0 * x));
  start += start % 2;
  double next = 0.0;
  double cur = 1e-30;
  double norm = 0.0;
  double out0 = 0.0;
  double out1 = 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = 2.0 * k / x * cur - next;
    next = cur;
    cur = prev;  // cur now holds J_{k-1}
    if (k - 1 == 1) out1 = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      out1 *= 1e-250;
    }
  }
  out0 = cur;
  norm += out0;
  j0 = out0 / norm;
  j1 = out1 / norm;
}

// McMahon's expansion, good to a few 1e-4 already at n = 1.
double j0_zero_guess(int n) {
  const double beta = (n - 0.25) * kPi;
  const double b8 = 8.0 * beta;
  return beta + 1.0 / b8 - 124.0 / (3.0 * b8 * b8 * b8);
}

double j0_zero_newton(int n) {
  double x = j0_zero_guess(n);
  for (int it = 0; it < 20; ++it) {
    const double step = bessel_j0(x) / bessel_j1(x);  // J0' = -J1
    x += step;
    if (std::abs(step) < 1e-15 * x) break;
  }
  return x;
}

struct ZeroTable {
  static constexpr int kSize = 2048;
  std::vector<double> zeros;
  ZeroTable() : zeros(kSize) {
    for (int n = 1; n <= kSize; ++n) zeros[n - 1] = j0_zero_newton(n);
  }
};

}  // namespace

double erfcx(double x) {
  require_nonnegative(x, "erfcx");
  if (x <= kErfcxSeam) return erfcx_series(x);
  return erfcx_continued_fraction(x);
}

double dawson(double z) {
  require_nonnegative(z, "dawson");
  if (z <= kDawsonSeries) return dawson_series(z);
  if (z < kDawsonAsym) return dawson_rybicki(z);
  return (1.0 + dawson_asymptotic_excess(z)) / (2.0 * z);
}

double dawson_excess(double z) {
  if (!(z > 0)) throw DomainError("dawson_excess: argument must be > 0");
  if (z < kDawsonAsym) return dawson(z) - 0.5 / z;
  return dawson_asymptotic_excess(z) / (2.0 * z);
}

double bessel_j0(double x) {
  require_nonnegative(x, "bessel_j0");
  if (x <= kBesselSeries) return j0_series(x);
  if (x < kBesselAsym) {
    double j0 = 0.0;
    double j1 = 0.0;
    bessel_miller(x, j0, j1);
    return j0;
  }
  return bessel_asymptotic(0, x);
}

double bessel_j1(double x) {
  require_nonnegative(x, "bessel_j1");
  if (x <= kBesselSeries) return j1_series(x);
  if (x < kBesselAsym) {
    double j0 = 0.0;
    double j1 = 0.0;
    bessel_miller(x, j0, j1);
    return j1;
  }
  return bessel_asymptotic(1, x);
}

double j0_zero(int n) {
  if (n < 1) throw DomainError("j0_zero: order must be >= 1");
  static const ZeroTable table;
  if (n <= ZeroTable::kSize) return table.zeros[n - 1];
  return j0_zero_newton(n);
}

SpecFunResult erfcx_result(double x) { return {erfcx(x), 2e-14}; }
SpecFunResult dawson_result(double z) { return {dawson(z), 2e-15}; }
SpecFunResult bessel_j0_result(double x) { return {bessel_j0(x), x < kBesselAsym ? 5e-14 : 1e-14}; }

}  // namespace harvest::specfun
