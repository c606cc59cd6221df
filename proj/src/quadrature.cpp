#include "harvest/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "harvest/errors.hpp"
#include "harvest/specfun.hpp"

namespace harvest::quadrature {
namespace {

// Kronrod abscissae / weights for the 15-point rule and the embedded 7-point
// Gauss weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double a;
  double b;
  double value;
  double error;
  double abs_value;  // integral of |g|, for the roundoff floor
  int order;         // creation order breaks error ties deterministically
};

struct ByError {
  bool operator()(const Segment& l, const Segment& r) const {
    if (l.error != r.error) return l.error < r.error;
    return l.order > r.order;
  }
};

double checked(const Integrand& g, double x) {
  const double v = g(x);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "integrand is not finite at x = " << x;
    throw NonFiniteIntegrand(os.str());
  }
  return v;
}

Segment gauss_kronrod(const Integrand& g, double a, double b, int order) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  const double fc = checked(g, center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_k = std::abs(kronrod);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = checked(g, center - dx);
    f2[j] = checked(g, center + dx);
    kronrod += kWgk[j] * (f1[j] + f2[j]);
    abs_k += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double result = kronrod * half;
  double err = std::abs((kronrod - gauss) * half);
  const double resasc = asc * std::abs(half);
  const double resabs = abs_k * std::abs(half);
  if (resasc != 0 && err != 0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50 * kEps)) err = std::max(50 * kEps * resabs, err);
  return {a, b, result, err, resabs, order};
}

double tolerance(const QuadratureSpec& spec, double value) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

}  // namespace

void QuadratureSpec::validate() const {
  const bool ok = rel_tol >= 1e-13 && abs_tol > 0 && max_subdivisions > 0 && tail_lobes > 0 && envelope_cutoff > 0 &&
                  std::isfinite(rel_tol) && std::isfinite(abs_tol) && std::isfinite(envelope_cutoff);
  if (!ok) throw InvalidParams("quadrature spec: all fields must be positive and rel_tol >= 1e-13");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Adaptive: return "adaptive";
    case Method::LobeAccelerated: return "lobe_accelerated";
    case Method::AbelRegularized: return "abel_regularized";
  }
  return "unknown";
}

QuadratureResult integrate_interval(const Integrand& g, double a, double b, const QuadratureSpec& spec,
                                    std::span<const double> breakpoints) {
  spec.validate();
  QuadratureResult out;
  out.truncation_x = b;
  if (a == b) return out;

  std::vector<double> edges{a};
  for (double p : breakpoints)
    if (p > a && p < b) edges.push_back(p);
  edges.push_back(b);
  std::sort(edges.begin() + 1, edges.end() - 1);

  int order = 0;
  std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
  double total = 0.0;
  double total_err = 0.0;
  double total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Segment s = gauss_kronrod(g, edges[i], edges[i + 1], order++);
    total += s.value;
    total_err += s.error;
    total_abs += s.abs_value;
    heap.push(s);
  }
  out.evaluations = 15L * order;

  int segments = static_cast<int>(heap.size());
  while (total_err > tolerance(spec, total)) {
    // Further splitting cannot beat the roundoff in summing |g|.
    if (total_err <= 50 * kEps * total_abs) break;
    if (segments >= spec.max_subdivisions) {
      std::ostringstream os;
      os << "adaptive quadrature on [" << a << ", " << b << "] hit " << spec.max_subdivisions
         << " subdivisions (value " << total << ", error " << total_err << ")";
      throw MaxSubdivisions(os.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const Segment left = gauss_kronrod(g, worst.a, mid, order++);
    const Segment right = gauss_kronrod(g, mid, worst.b, order++);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    ++segments;
  }

  // Re-sum in partition order so the result does not depend on heap history.
  std::vector<Segment> parts;
  parts.reserve(heap.size());
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  std::sort(parts.begin(), parts.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
  out.value = 0.0;
  out.est_error = 0.0;
  for (const Segment& s : parts) {
    out.value += s.value;
    out.est_error += s.error;
  }
  return out;
}

QuadratureResult integrate_decaying(const Integrand& g, double x_cut, const QuadratureSpec& spec,
                                    std::span<const double> breakpoints) {
  if (!(x_cut > 0) || !std::isfinite(x_cut)) throw DomainError("integrate_decaying: truncation must be finite and > 0");
  QuadratureResult r = integrate_interval(g, 0.0, x_cut, spec, breakpoints);
  r.method = Method::Adaptive;
  r.truncation_x = x_cut;
  return r;
}

std::vector<double> bessel_breakpoints(double L, double x_max, int max_count) {
  std::vector<double> out;
  if (!(L > 0)) return out;
  for (int n = 1; static_cast<int>(out.size()) < max_count; ++n) {
    const double z = specfun::j0_zero(n) / L;
    if (z >= x_max) break;
    out.push_back(z);
  }
  return out;
}

namespace {

// Euler transform in partial-sum form: repeatedly average neighbouring partial
// sums of the last `window` entries.
double euler_estimate(const std::vector<double>& partial, std::size_t window) {
  window = std::min(window, partial.size());
  std::vector<double> t(partial.end() - static_cast<std::ptrdiff_t>(window), partial.end());
  for (std::size_t level = 1; level < window; ++level)
    for (std::size_t i = 0; i + level < window; ++i) t[i] = 0.5 * (t[i] + t[i + 1]);
  return t[0];
}

}  // namespace

QuadratureResult integrate_bessel_tail(const Integrand& h, double L, double x_start, const QuadratureSpec& spec) {
  spec.validate();
  if (!(L > 0) || !std::isfinite(L)) throw DomainError("integrate_bessel_tail: L must be finite and > 0");
  if (!(x_start >= 0)) throw DomainError("integrate_bessel_tail: x_start must be >= 0");

  auto integrand = [&h, L](double x) { return h(x) * specfun::bessel_j0(x * L); };

  // First zero strictly beyond x_start.
  int n = std::max(1, static_cast<int>(std::floor(x_start * L / 3.141592653589793 + 0.25)) - 1);
  while (specfun::j0_zero(n) / L <= x_start) ++n;

  QuadratureResult out;
  out.method = Method::LobeAccelerated;
  double edge = specfun::j0_zero(n) / L;
  const QuadratureResult head = integrate_interval(integrand, x_start, edge, spec);
  out.evaluations = head.evaluations;
  double quad_err = head.est_error;

  constexpr std::size_t kWindow = 14;
  constexpr int kMinLobes = 4;
  std::vector<double> partial;
  partial.reserve(spec.tail_lobes + 1);
  partial.push_back(head.value);
  double previous = head.value;
  for (int lobe = 0; lobe < spec.tail_lobes; ++lobe) {
    const double next_edge = specfun::j0_zero(n + lobe + 1) / L;
    const QuadratureResult piece = integrate_interval(integrand, edge, next_edge, spec);
    out.evaluations += piece.evaluations;
    quad_err += piece.est_error;
    partial.push_back(partial.back() + piece.value);
    edge = next_edge;

    const double estimate = euler_estimate(partial, kWindow);
    const double change = std::abs(estimate - previous);
    previous = estimate;
    if (lobe + 1 >= kMinLobes && change <= tolerance(spec, estimate)) {
      out.value = estimate;
      out.est_error = change + quad_err;
      out.truncation_x = edge;
      return out;
    }
  }
  std::ostringstream os;
  os << "Bessel tail acceleration did not reach tolerance within " << spec.tail_lobes << " lobes (L = " << L
     << ", x_start = " << x_start << ", last estimate " << previous << ")";
  throw SlowConvergence(os.str());
}

double abel_regularized_linear_tail(double c, double L) {
  if (!(L > 0)) throw DomainError("abel_regularized_linear_tail: coincident detectors (L <= 0) are not regularizable");
  (void)c;
  return 0.0;
}

}  // namespace harvest::quadrature
