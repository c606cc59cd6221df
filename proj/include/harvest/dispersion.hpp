#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harvest/units.hpp"

namespace harvest {

// Which f(x) the quasiparticles follow; x = c_0 |k| / M* throughout.
enum class DispersionKind {
  LorentzInvariantIdeal,  // f == 1
  ContactBogoliubov,      // f = sqrt(1 + x^2/4)
  DipolarBogoliubov,      // full (R, A) dependence
};

std::string_view to_string(DispersionKind kind);
/// Accepts the short names li / contact / dipolar as well as the enum names.
DispersionKind parse_dispersion_kind(std::string_view name);

namespace dispersion {

/// f^2 before the square root; negative means the spectrum is unstable at x.
double radicand(const DimensionlessModel& model, DispersionKind kind, double x);

double f_factor(const DimensionlessModel& model, DispersionKind kind, double x);

/// omega/M* = x f(x).
double omega(const DimensionlessModel& model, DispersionKind kind, double x);

/// (u + v)^2 = H/omega = x / (2 f). Requires x > 0.
double bogoliubov_weight(const DimensionlessModel& model, DispersionKind kind, double x);

/// Individual Bogoliubov amplitudes, for checking the normalisation only.
struct BogoliubovAmplitudes {
  long double u;
  long double v;
};
BogoliubovAmplitudes bogoliubov_amplitudes(const DimensionlessModel& model, DispersionKind kind, double x);

struct CriticalPoint {
  double A_c = 0.0;
  double x_min = 0.0;          // where the radicand touches zero
  double min_radicand = 0.0;   // at A_c, should be ~0
};

/// Smallest A at which min_x f^2 reaches zero, for R in (0, sqrt(pi/2)].
/// Throws NoInstability if the spectrum stays stable for A up to 100.
CriticalPoint critical_point(double R);

/// Minimum of f^2 over x in (0, 10]; 1 for kinds without a dip.
double min_radicand(const DimensionlessModel& model, DispersionKind kind, double* x_at = nullptr);
/// Throws UnstableSpectrum when f^2 goes negative anywhere.
void require_stable(const DimensionlessModel& model, DispersionKind kind);
inline double critical_A(double R) { return critical_point(R).A_c; }

struct SpectrumSample {
  double x;
  double f;
  double omega;
};

struct Roton {
  double x;
  double f;
};

struct SpectrumReport {
  std::vector<SpectrumSample> samples;
  std::optional<Roton> roton;
  bool stable = true;
  double min_f2 = 1.0;
  std::optional<double> crossover_x;  // contact kind only
};

/// Samples f on a uniform grid of n points over [0, x_max] and locates the roton.
SpectrumReport analyze_spectrum(const DimensionlessModel& model, DispersionKind kind, double x_max = 10.0, int n = 201);

/// Smallest x with omega(x) * sigma >= level and omega increasing beyond it.
double envelope_cut(const DimensionlessModel& model, DispersionKind kind, double sigma, double level);

}  // namespace dispersion
}  // namespace harvest
