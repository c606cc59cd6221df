#include <doctest.h>

#include <chrono>
#include <cmath>

#include "harvest/dispersion.hpp"
#include "harvest/errors.hpp"
#include "harvest/units.hpp"
#include "support/extended.hpp"

using namespace harvest;
using namespace harvest::dispersion;

namespace {

constexpr auto LI = DispersionKind::LorentzInvariantIdeal;
constexpr auto Contact = DispersionKind::ContactBogoliubov;
constexpr auto Dipolar = DispersionKind::DipolarBogoliubov;

DimensionlessModel dip(double A) { return DimensionlessModel::create(kMaxR, A); }

// f from the formula with the quad-precision erfcx oracle.
double f_oracle(double R, double A, double x) {
  const double s = std::sqrt(A);
  const double w = static_cast<double>(oracle_q::erfcx(s * x / std::sqrt(2.0)));
  return std::sqrt(1.0 - 1.5 * R * s * x * w + 0.25 * x * x);
}

}  // namespace

TEST_CASE("f at x = 0 is 1 for every kind") {
  const auto m = dip(2.0);
  for (auto k : {LI, Contact, Dipolar}) CHECK(f_factor(m, k, 0.0) == 1.0);
}

TEST_CASE("contact f and omega") {
  const auto m = DimensionlessModel::create(0.0, 1.0);
  CHECK(f_factor(m, Contact, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(omega(m, Contact, 2.0) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-15));
  for (double x : {0.1, 1.0, 7.0}) {
    const double w = omega(m, Contact, x);
    CHECK(w * w == doctest::Approx(x * x + x * x * x * x / 4).epsilon(1e-14));
  }
  CHECK(omega(m, LI, 3.0) == 3.0);
  CHECK(omega(m, Contact, 0.0) == 0.0);
}

TEST_CASE("dipolar f below 1 near the roton") {
  const double f = f_factor(dip(3.0), Dipolar, 0.9);
  CHECK(f < 1.0);
  CHECK(f == doctest::Approx(f_oracle(kMaxR, 3.0, 0.9)).epsilon(1e-12));
  CHECK(f == doctest::Approx(0.163768059).epsilon(1e-8));
}

TEST_CASE("dipolar f matches the oracle formula across x") {
  for (double A : {0.5, 2.0, 3.4}) {
    for (int i = 1; i <= 100; ++i) {
      const double x = 0.1 * i;
      CHECK(f_factor(dip(A), Dipolar, x) == doctest::Approx(f_oracle(kMaxR, A, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("bogoliubov weight") {
  const auto m = dip(2.0);
  CHECK(bogoliubov_weight(m, LI, 1.0) == 0.5);
  for (auto k : {LI, Contact, Dipolar}) {
    for (double x : {1e-4, 0.3, 0.9, 2.0, 10.0}) {
      CHECK(bogoliubov_weight(m, k, x) * f_factor(m, k, x) == doctest::Approx(x / 2).epsilon(1e-15));
      CHECK(bogoliubov_weight(m, k, x) * omega(m, k, x) == doctest::Approx(x * x / 2).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(bogoliubov_weight(m, Contact, 0.0), DomainError);
}

TEST_CASE("u^2 - v^2 = 1 and (u + v)^2 omega = x^2 / 2 on a log grid") {
  const DimensionlessModel models[] = {DimensionlessModel::create(0.0, 1.0), dip(1.0), dip(3.4)};
  const DispersionKind kinds[] = {Contact, Dipolar, Dipolar};
  for (int j = 0; j < 3; ++j) {
    double worst_norm = 0.0, worst_weight = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double x = 1e-4 * std::pow(1e5, i / 9999.0);
      const auto uv = bogoliubov_amplitudes(models[j], kinds[j], x);
      worst_norm = std::max(worst_norm, static_cast<double>(std::abs(uv.u * uv.u - uv.v * uv.v - 1.0L)));
      const long double s = uv.u + uv.v;
      const double lhs = static_cast<double>(s * s) * omega(models[j], kinds[j], x);
      worst_weight = std::max(worst_weight, std::abs(lhs - x * x / 2) / (x * x / 2));
    }
    CHECK(worst_norm < 1e-12);
    CHECK(worst_weight < 1e-12);
  }
}

TEST_CASE("critical A at sqrt(pi/2)") {
  const auto t0 = std::chrono::steady_clock::now();
  const CriticalPoint cp = critical_point(kMaxR);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(std::abs(cp.A_c - 3.4454) < 5e-4);
  CHECK(std::abs(cp.min_radicand) < 1e-6);
  CHECK(secs < 1.0);
  // Regression values for this implementation.
  CHECK(cp.A_c == doctest::Approx(3.4456554).epsilon(1e-7));
  CHECK(cp.x_min == doctest::Approx(0.870230936).epsilon(1e-6));
}

TEST_CASE("critical A is decreasing in R and absent at small R") {
  CHECK_THROWS_AS(critical_A(0.1), NoInstability);
  // Below (2/3) sqrt(pi/2) the minimum of f^2 stays positive for all A.
  CHECK_THROWS_AS(critical_A(0.8), NoInstability);
  const double a1 = critical_A(1.0), a2 = critical_A(1.15), a3 = critical_A(kMaxR);
  CHECK(a1 > a2);
  CHECK(a2 > a3);
  CHECK_THROWS_AS(critical_A(0.0), DomainError);
  CHECK_THROWS_AS(critical_A(2.0), DomainError);
}

TEST_CASE("spectrum analysis") {
  const auto li = analyze_spectrum(dip(1.0), LI, 10.0, 201);
  CHECK(li.stable);
  CHECK(!li.roton);
  CHECK(li.min_f2 == 1.0);
  CHECK(!li.crossover_x);

  const auto c = analyze_spectrum(DimensionlessModel::create(0.0, 1.0), Contact, 10.0, 201);
  CHECK(!c.roton);
  REQUIRE(c.crossover_x);
  CHECK(*c.crossover_x == 2.0);
  for (std::size_t i = 1; i < c.samples.size(); ++i) CHECK(c.samples[i].f > c.samples[i - 1].f);

  const auto r = analyze_spectrum(dip(3.4), Dipolar, 10.0, 201);
  CHECK(r.stable);
  REQUIRE(r.roton);
  CHECK(r.roton->x == doctest::Approx(0.8716885).epsilon(1e-6));
  CHECK(std::abs(r.roton->x - 0.9) < 0.05);
  CHECK(r.roton->f * r.roton->f == doctest::Approx(0.0025296).epsilon(1e-4));

  CHECK_THROWS_AS(analyze_spectrum(dip(1.0), LI, 10.0, 15), DomainError);
  CHECK_THROWS_AS(analyze_spectrum(dip(1.0), LI, 0.0, 100), DomainError);
}

TEST_CASE("unstable radicand is reported") {
  // Bypass the A gate with an R just below dipole dominance.
  const auto m = DimensionlessModel::create(1.25, 10.0);
  CHECK_THROWS_AS(f_factor(m, Dipolar, 0.6), UnstableSpectrum);
  CHECK_THROWS_AS(require_stable(m, Dipolar), UnstableSpectrum);
  CHECK_THROWS_AS(analyze_spectrum(m, Dipolar, 10.0, 201), UnstableSpectrum);
  CHECK_NOTHROW(require_stable(m, Contact));
  CHECK_THROWS_AS(f_factor(m, Contact, -1.0), DomainError);
}

TEST_CASE("superluminal without dipoles, subluminal window with them") {
  const auto c = DimensionlessModel::create(0.0, 1.0);
  for (int i = 1; i <= 100; ++i) CHECK(f_factor(c, Contact, 0.1 * i) > 1.0);
  bool below = false;
  for (int i = 1; i <= 100; ++i) below = below || f_factor(dip(2.0), Dipolar, 0.1 * i) < 1.0;
  CHECK(below);
}

TEST_CASE("f at the roton momentum decreases with A") {
  double prev = 2.0;
  for (double A : {0.5, 1.0, 2.0, 3.0}) {
    const double f = f_factor(dip(A), Dipolar, 0.9);
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("phonon limit omega / x -> 1") {
  for (auto k : {LI, Contact, Dipolar})
    for (double A : {0.5, 3.4}) CHECK(std::abs(omega(dip(A), k, 1e-6) / 1e-6 - 1.0) < 1e-5);
}

TEST_CASE("envelope cut sits beyond the roton") {
  for (double sigma : {1.0, 5.0}) {
    const double level = 8.0;
    const double x = envelope_cut(dip(3.4), Dipolar, sigma, level);
    CHECK(omega(dip(3.4), Dipolar, x) * sigma == doctest::Approx(level).epsilon(1e-10));
    for (double y = x; y < x + 5; y += 0.01) CHECK(omega(dip(3.4), Dipolar, y) * sigma >= level * (1 - 1e-12));
  }
  CHECK(envelope_cut(dip(1.0), LI, 4.0, 8.0) == 2.0);
}
