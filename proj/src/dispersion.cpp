#include "harvest/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "harvest/errors.hpp"
#include "harvest/specfun.hpp"

namespace harvest {

std::string_view to_string(DispersionKind kind) {
  switch (kind) {
    case DispersionKind::LorentzInvariantIdeal: return "li";
    case DispersionKind::ContactBogoliubov: return "contact";
    case DispersionKind::DipolarBogoliubov: return "dipolar";
  }
  return "unknown";
}

DispersionKind parse_dispersion_kind(std::string_view name) {
  if (name == "li" || name == "LorentzInvariantIdeal" || name == "lorentz-invariant")
    return DispersionKind::LorentzInvariantIdeal;
  if (name == "contact" || name == "ContactBogoliubov") return DispersionKind::ContactBogoliubov;
  if (name == "dipolar" || name == "DipolarBogoliubov") return DispersionKind::DipolarBogoliubov;
  throw ConfigError("unknown dispersion kind '" + std::string(name) + "' (expected li, contact or dipolar)");
}

namespace dispersion {
namespace {

constexpr double kGolden = 0.61803398874989484820;
// Past this x the dipolar omega(x) is monotone for every admissible (R, A).
constexpr double kDipolarFeatureEnd = 4.0;

template <class F>
double golden_section_min(F&& g, double a, double b, double& g_min) {
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * (1.0 + std::abs(a)); ++it) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kGolden * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kGolden * (b - a);
      gd = g(d);
    }
  }
  if (gc < gd) {
    g_min = gc;
    return c;
  }
  g_min = gd;
  return d;
}

double dipolar_min_radicand(double R, double A, double& x_at) {
  auto g = [R, A](double x) {
    const double sqrtA = std::sqrt(A);
    return 1.0 - 1.5 * R * sqrtA * x * specfun::erfcx(sqrtA * x / std::sqrt(2.0)) + 0.25 * x * x;
  };
  constexpr int kScan = 400;
  constexpr double kXMax = 10.0;
  int best = 1;
  double best_val = g(kXMax / kScan);
  for (int i = 2; i <= kScan; ++i) {
    const double v = g(i * kXMax / kScan);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = (best - 1) * kXMax / kScan;
  const double b = std::min(kXMax, (best + 1) * kXMax / kScan);
  double val = 0.0;
  x_at = golden_section_min(g, std::max(a, 1e-9), b, val);
  if (best_val < val) x_at = best * kXMax / kScan;
  return std::min(val, best_val);
}

void require_x(double x) {
  if (!(x >= 0)) {
    std::ostringstream os;
    os << "dispersion: momentum x = " << x << " must be >= 0";
    throw DomainError(os.str());
  }
}

}  // namespace

double radicand(const DimensionlessModel& model, DispersionKind kind, double x) {
  require_x(x);
  switch (kind) {
    case DispersionKind::LorentzInvariantIdeal: return 1.0;
    case DispersionKind::ContactBogoliubov: return 1.0 + 0.25 * x * x;
    case DispersionKind::DipolarBogoliubov: {
      const double A = model.A();
      if (A == 0.0 || model.R() == 0.0) return 1.0 + 0.25 * x * x;
      const double sqrtA = std::sqrt(A);
      return 1.0 - 1.5 * model.R() * sqrtA * x * specfun::erfcx(sqrtA * x / std::sqrt(2.0)) + 0.25 * x * x;
    }
  }
  return 1.0;
}

double f_factor(const DimensionlessModel& model, DispersionKind kind, double x) {
  const double r = radicand(model, kind, x);
  if (r < 0) {
    std::ostringstream os;
    os << "unstable spectrum: f^2 = " << r << " < 0 at x = " << x << " (R = " << model.R() << ", A = " << model.A()
       << ")";
    throw UnstableSpectrum(os.str());
  }
  return std::sqrt(r);
}

double omega(const DimensionlessModel& model, DispersionKind kind, double x) {
  return x * f_factor(model, kind, x);
}

double bogoliubov_weight(const DimensionlessModel& model, DispersionKind kind, double x) {
  if (!(x > 0)) throw DomainError("bogoliubov_weight: x must be > 0");
  return x / (2.0 * f_factor(model, kind, x));
}

BogoliubovAmplitudes bogoliubov_amplitudes(const DimensionlessModel& model, DispersionKind kind, double x) {
  if (!(x > 0)) throw DomainError("bogoliubov_amplitudes: x must be > 0");
  const long double h = 0.5L * x * x;
  const long double w = static_cast<long double>(x) * std::sqrt(static_cast<long double>(radicand(model, kind, x)));
  if (!(w > 0)) throw UnstableSpectrum("bogoliubov_amplitudes: non-positive frequency");
  const long double denom = 2.0L * std::sqrt(h * w);
  return {(h + w) / denom, (h - w) / denom};
}

CriticalPoint critical_point(double R) {
  if (!(R > 0) || R > kMaxR + 1e-12) {
    std::ostringstream os;
    os << "critical_A: R = " << R << " outside (0, sqrt(pi/2)]";
    throw DomainError(os.str());
  }
  const double r = std::min(R, kMaxR);

  constexpr double kAMax = 100.0;
  double x_at = 0.0;
  if (dipolar_min_radicand(r, kAMax, x_at) > 0) {
    std::ostringstream os;
    os << "critical_A: spectrum stays stable for all A in [0, " << kAMax << "] at R = " << R;
    throw NoInstability(os.str());
  }
  double lo = 0.0;
  double hi = kAMax;
  while (hi - lo > 1e-11) {
    const double mid = 0.5 * (lo + hi);
    if (dipolar_min_radicand(r, mid, x_at) > 0)
      lo = mid;
    else
      hi = mid;
  }
  CriticalPoint cp;
  cp.A_c = 0.5 * (lo + hi);
  cp.min_radicand = dipolar_min_radicand(r, cp.A_c, cp.x_min);
  return cp;
}

double min_radicand(const DimensionlessModel& model, DispersionKind kind, double* x_at) {
  double where = 0.0;
  double value = 1.0;
  if (kind == DispersionKind::DipolarBogoliubov && model.A() > 0 && model.R() > 0)
    value = dipolar_min_radicand(model.R(), model.A(), where);
  if (x_at) *x_at = where;
  return value;
}

void require_stable(const DimensionlessModel& model, DispersionKind kind) {
  double x_at = 0.0;
  const double m = min_radicand(model, kind, &x_at);
  if (m < 0) {
    std::ostringstream os;
    os << "unstable spectrum: min f^2 = " << m << " at x = " << x_at << " (R = " << model.R() << ", A = " << model.A()
       << ")";
    throw UnstableSpectrum(os.str());
  }
}

SpectrumReport analyze_spectrum(const DimensionlessModel& model, DispersionKind kind, double x_max, int n) {
  if (!(x_max > 0) || n < 16) throw DomainError("analyze_spectrum: need x_max > 0 and n >= 16");
  SpectrumReport report;
  report.samples.reserve(n);
  std::vector<double> f2(n);
  for (int i = 0; i < n; ++i) {
    const double x = i * x_max / (n - 1);
    f2[i] = radicand(model, kind, x);
    if (f2[i] < 0) {
      std::ostringstream os;
      os << "analyze_spectrum: f^2 = " << f2[i] << " < 0 at x = " << x;
      throw UnstableSpectrum(os.str());
    }
    const double f = std::sqrt(f2[i]);
    report.samples.push_back({x, f, x * f});
  }
  report.min_f2 = *std::min_element(f2.begin(), f2.end());

  auto g = [&](double x) { return radicand(model, kind, x); };
  for (int i = 1; i + 1 < n; ++i) {
    if (!(f2[i] <= f2[i - 1] && f2[i] < f2[i + 1])) continue;
    double g_min = 0.0;
    const double xm = golden_section_min(g, report.samples[i - 1].x, report.samples[i + 1].x, g_min);
    if (g_min < 0) throw UnstableSpectrum("analyze_spectrum: negative f^2 near an interior minimum");
    report.min_f2 = std::min(report.min_f2, g_min);
    const double fm = std::sqrt(g_min);
    if (fm < 1.0 - 1e-9 && (!report.roton || fm < report.roton->f)) report.roton = Roton{xm, fm};
  }
  report.stable = report.min_f2 > 0;
  if (kind == DispersionKind::ContactBogoliubov) report.crossover_x = 2.0;
  return report;
}

double envelope_cut(const DimensionlessModel& model, DispersionKind kind, double sigma, double level) {
  if (!(sigma > 0) || !(level > 0)) throw DomainError("envelope_cut: sigma and level must be > 0");
  const double target = level / sigma;
  if (kind == DispersionKind::LorentzInvariantIdeal) return target;

  auto w = [&](double x) { return omega(model, kind, x); };
  double lo = 0.0;
  double hi = 1.0;
  if (kind == DispersionKind::DipolarBogoliubov && w(kDipolarFeatureEnd) >= target) {
    // The crossing may sit inside the roton region; walk down from where omega is
    // known to be monotone so no weight hiding behind a dip is dropped.
    constexpr double kStep = 0.01;
    hi = kDipolarFeatureEnd;
    for (double x = hi - kStep; x > 0; x -= kStep) {
      if (w(x) < target) {
        lo = x;
        break;
      }
      hi = x;
    }
  } else {
    if (kind == DispersionKind::DipolarBogoliubov) lo = hi = kDipolarFeatureEnd;
    while (w(hi) < target) {
      lo = hi;
      hi *= 2.0;
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (w(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

}  // namespace dispersion
}  // namespace harvest
