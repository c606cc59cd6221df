#include <doctest.h>

#include <cmath>
#include <limits>

#include "harvest/errors.hpp"
#include "harvest/quadrature.hpp"
#include "harvest/specfun.hpp"
#include "support/extended.hpp"
#include "support/families.hpp"

using namespace harvest;
using namespace harvest::quadrature;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Abel-damped reference for int_0^inf x J0(x) e^{-eta x}: Simpson out to where
// e^{-eta x} < e^{-60}, with libstdc++'s J0.
double damped_linear(double eta) {
  const double X = 60.0 / eta;
  const long n = static_cast<long>(X * 300);
  return brute::simpson([eta](double x) { return x * std::cyl_bessel_j(0.0, x) * std::exp(-eta * x); }, 0.0, X, n);
}

}  // namespace

TEST_CASE("closed-form decaying integrals") {
  const QuadratureSpec spec;
  const auto r1 = integrate_decaying([](double x) { return x * std::exp(-x * x); }, 8.0, spec);
  CHECK(std::abs(r1.value - 0.5) < 1e-12);
  CHECK(r1.method == Method::Adaptive);
  CHECK(r1.truncation_x == 8.0);

  const auto r2 = integrate_decaying([](double x) { return std::exp(-(x + 1) * (x + 1)); }, 8.0, spec);
  const double erfc1 = static_cast<double>(1 - oracle_q::erf(1));
  CHECK(std::abs(r2.value - std::sqrt(M_PI) / 2 * erfc1) < 1e-12);

  auto g = [](double x) { return x * std::exp(-x * x) * specfun::bessel_j0(2 * x); };
  const auto r3 = integrate_decaying(g, 12.0, spec, bessel_breakpoints(2.0, 12.0, 400));
  const double ref = brute::simpson([](double x) { return x * std::exp(-x * x) * std::cyl_bessel_j(0.0, 2 * x); },
                                    0.0, 12.0, 1000000);
  CHECK(rel(r3.value, ref) < 1e-9);
  CHECK(rel(r3.value, std::exp(-1.0) / 2) < 1e-9);  // Hankel transform of a Gaussian
}

TEST_CASE("randomized Gaussian-Bessel family against Simpson") {
  QuadratureSpec spec;
  spec.abs_tol = 1e-300;
  int within = 0, bounded = 0;
  const auto ms = family::members(50);
  for (const auto& m : ms) {
    const double ref = family::simpson_reference(m);
    auto g = [&m](double x) { return m.envelope(x) * specfun::bessel_j0(x * m.L); };
    const double cut = m.cut();
    const auto r = integrate_decaying(g, cut, spec, bessel_breakpoints(m.L, cut, 400));
    if (rel(r.value, ref) < 1e-8) ++within;
    if (std::abs(r.value - ref) <= r.est_error) ++bounded;
  }
  CHECK(within == 50);
  CHECK(bounded >= 48);  // 95% calibration
}

TEST_CASE("results are bit-identical on repeat and stable under more subdivisions") {
  QuadratureSpec spec;
  auto g = [](double x) { return x * x * std::exp(-std::pow(x * std::sqrt(1 + x * x / 4) + 0.3, 2) * 4) * specfun::bessel_j0(3 * x); };
  const auto a = integrate_decaying(g, 3.0, spec);
  const auto b = integrate_decaying(g, 3.0, spec);
  CHECK(a.value == b.value);
  CHECK(a.est_error == b.est_error);
  CHECK(a.evaluations == b.evaluations);
  spec.max_subdivisions *= 2;
  const auto c = integrate_decaying(g, 3.0, spec);
  CHECK(std::abs(c.value - a.value) <= a.est_error);
}

TEST_CASE("adaptive failure modes") {
  QuadratureSpec spec;
  spec.max_subdivisions = 3;
  spec.rel_tol = 1e-13;
  auto spiky = [](double x) { return std::sin(200 * x) * std::exp(-x); };
  CHECK_THROWS_AS(integrate_interval(spiky, 0.0, 10.0, spec), MaxSubdivisions);

  const QuadratureSpec ok;
  auto nan_at = [](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : x; };
  CHECK_THROWS_AS(integrate_interval(nan_at, 0.0, 1.0, ok), NonFiniteIntegrand);
  CHECK_THROWS_AS(integrate_decaying([](double x) { return x; }, 0.0, ok), DomainError);
  CHECK_THROWS_AS(integrate_decaying([](double x) { return x; }, INFINITY, ok), DomainError);

  QuadratureSpec bad;
  bad.rel_tol = 1e-15;
  CHECK_THROWS_AS(bad.validate(), InvalidParams);
  bad = QuadratureSpec{};
  bad.tail_lobes = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidParams);
}

TEST_CASE("Bessel tail with a Gaussian envelope") {
  const QuadratureSpec spec;
  auto h = [](double x) { return x * std::exp(-x * x / 8); };
  const double x0 = 2.0;
  const auto r = integrate_bessel_tail(h, 3.0, x0, spec);
  CHECK(r.method == Method::LobeAccelerated);
  const double ref = brute::simpson([&](double x) { return h(x) * std::cyl_bessel_j(0.0, 3 * x); }, x0, 40.0, 400000);
  CHECK(std::abs(r.value - ref) < 1e-8);
}

TEST_CASE("Bessel tail with an algebraic envelope") {
  const QuadratureSpec spec;
  auto h = [](double x) { return std::pow(x, -1.5); };
  const auto r = integrate_bessel_tail(h, 1.0, 5.0, spec);
  // Simpson on [5, X] plus the two-term asymptotic remainder from X on; the
  // remainder is ~3e-8 here and the neglected part ~X^-4.
  const double X = 5000.0;
  const double body =
      brute::simpson([&](double x) { return h(x) * std::cyl_bessel_j(0.0, x); }, 5.0, X, 10000000);
  const double phi = X - M_PI / 4;
  const double rest = std::sqrt(2 / M_PI) * (-std::sin(phi) / (X * X) + 2.125 * std::cos(phi) / (X * X * X));
  CHECK(rel(r.value, body + rest) < 1e-7);
}

TEST_CASE("Bessel tail failure modes") {
  QuadratureSpec spec;
  spec.tail_lobes = 6;
  auto growing = [](double x) { return std::pow(x, 1.5); };
  CHECK_THROWS_AS(integrate_bessel_tail(growing, 1.0, 1.0, spec), SlowConvergence);
  CHECK_THROWS_AS(integrate_bessel_tail(growing, 0.0, 1.0, QuadratureSpec{}), DomainError);
  CHECK_THROWS_AS(integrate_bessel_tail(growing, 1.0, -1.0, QuadratureSpec{}), DomainError);
}

TEST_CASE("Abel value of the linear Hankel tail") {
  CHECK(abel_regularized_linear_tail(1.0, 1.0) == 0.0);
  CHECK(abel_regularized_linear_tail(-3.5, 0.2) == 0.0);
  CHECK_THROWS_AS(abel_regularized_linear_tail(1.0, 0.0), DomainError);

  double prev = 1.0;
  for (double eta : {1e-1, 1e-2, 1e-3}) {
    const double exact = eta / std::pow(1 + eta * eta, 1.5);
    const double num = damped_linear(eta);
    CHECK(std::abs(num - exact) <= 1e-4 * exact);
    CHECK(std::abs(num) < prev);  // tends to the Abel value 0
    prev = std::abs(num);
  }
}

TEST_CASE("bessel breakpoints") {
  const auto bp = bessel_breakpoints(2.0, 10.0, 400);
  REQUIRE(!bp.empty());
  for (double z : bp) {
    CHECK(z < 10.0);
    CHECK(std::abs(specfun::bessel_j0(2 * z)) < 1e-12);
  }
  CHECK(bessel_breakpoints(2.0, 1e6, 5).size() == 5);
  CHECK(bessel_breakpoints(0.0, 10.0, 5).empty());
}
