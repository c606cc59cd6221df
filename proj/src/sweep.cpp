#include "harvest/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <set>
#include <sstream>

#include "harvest/errors.hpp"

namespace harvest::sweep {
namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void check_axis_values(const SweepAxis& axis, DispersionKind kind) {
  for (double v : axis.values) {
    if (!std::isfinite(v)) throw ConfigError("axis " + std::string(to_string(axis.name)) + " has a non-finite value");
    std::ostringstream os;
    switch (axis.name) {
      case AxisName::OmegaGap:
        if (v < 0) os << "omega_gap values must be >= 0 (got " << v << ")";
        break;
      case AxisName::Separation:
        if (v <= 0) os << "separation values must be > 0 (got " << v << "); X is undefined for coincident detectors";
        break;
      case AxisName::Sigma:
        if (v <= 0) os << "sigma values must be > 0 (got " << v << ")";
        break;
      case AxisName::A:
        if (v < 0) os << "A values must be >= 0 (got " << v << ")";
        if (kind != DispersionKind::DipolarBogoliubov) os << "an A axis needs --kind dipolar";
        break;
      case AxisName::R:
        if (v < 0 || v > kMaxR + 1e-12) os << "R values must lie in [0, sqrt(pi/2)] (got " << v << ")";
        if (kind != DispersionKind::DipolarBogoliubov) os << "an R axis needs --kind dipolar";
        break;
    }
    if (!os.str().empty()) throw ConfigError(os.str());
  }
}

}  // namespace

std::string_view to_string(AxisName name) {
  switch (name) {
    case AxisName::OmegaGap: return "omega_gap";
    case AxisName::Separation: return "separation";
    case AxisName::Sigma: return "sigma";
    case AxisName::A: return "A";
    case AxisName::R: return "R";
  }
  return "unknown";
}

AxisName parse_axis_name(std::string_view name) {
  if (name == "omega_gap") return AxisName::OmegaGap;
  if (name == "separation") return AxisName::Separation;
  if (name == "sigma") return AxisName::Sigma;
  if (name == "A") return AxisName::A;
  if (name == "R") return AxisName::R;
  throw ConfigError("unknown axis '" + std::string(name) + "' (expected omega_gap, separation, sigma, A or R)");
}

std::string_view to_string(Spacing s) {
  switch (s) {
    case Spacing::Explicit: return "explicit";
    case Spacing::Linear: return "linear";
    case Spacing::Log: return "log";
  }
  return "unknown";
}

std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Ok: return "ok";
    case RowStatus::Unstable: return "unstable";
    case RowStatus::QuadratureFailed: return "quadrature_failed";
  }
  return "unknown";
}

SweepAxis SweepAxis::range(AxisName name, double min, double max, int count, Spacing spacing) {
  const std::string label(to_string(name));
  if (count < 1) throw ConfigError("axis " + label + ": count must be >= 1");
  if (!(min < max) && count > 1) throw ConfigError("axis " + label + ": need min < max");
  if (spacing == Spacing::Log && !(min > 0)) throw ConfigError("axis " + label + ": log spacing needs min > 0");
  if (spacing == Spacing::Explicit) throw ConfigError("axis " + label + ": a range needs linear or log spacing");
  SweepAxis axis;
  axis.name = name;
  axis.spacing = spacing;
  axis.values.resize(count);
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    axis.values[i] = spacing == Spacing::Log ? min * std::pow(max / min, t) : min + t * (max - min);
  }
  // Pin the end points so they are exact.
  axis.values.front() = min;
  if (count > 1) axis.values.back() = max;
  return axis;
}

SweepAxis SweepAxis::list(AxisName name, std::vector<double> values) {
  if (values.empty()) throw ConfigError("axis " + std::string(to_string(name)) + ": empty value list");
  SweepAxis axis;
  axis.name = name;
  axis.values = std::move(values);
  axis.spacing = Spacing::Explicit;
  return axis;
}

void SweepRequest::validate() const {
  if (axes.empty()) throw ConfigError("sweep needs at least one axis");
  std::set<AxisName> seen;
  for (const SweepAxis& a : axes) {
    if (!seen.insert(a.name).second) throw ConfigError("axis " + std::string(to_string(a.name)) + " given twice");
    if (a.values.empty()) throw ConfigError("axis " + std::string(to_string(a.name)) + " has no values");
    check_axis_values(a, kind);
  }
  try {
    spec.validate();
    base.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

std::size_t SweepRequest::point_count() const {
  std::size_t n = 1;
  for (const SweepAxis& a : axes) n *= a.values.size();
  return n;
}

SweepRow evaluate_point(const SweepRequest& req, std::size_t index) {
  SweepRow row;
  row.coords.resize(req.axes.size());
  std::size_t rest = index;
  for (std::size_t k = req.axes.size(); k-- > 0;) {
    const auto& vals = req.axes[k].values;
    row.coords[k] = vals[rest % vals.size()];
    rest /= vals.size();
  }
  double R = req.R;
  double A = req.A;
  DetectorPair pair = req.base;
  for (std::size_t k = 0; k < req.axes.size(); ++k) {
    const double v = row.coords[k];
    switch (req.axes[k].name) {
      case AxisName::OmegaGap: pair.omega_gap = v; break;
      case AxisName::Separation: pair.separation = v; break;
      case AxisName::Sigma: pair.sigma = v; break;
      case AxisName::A: A = v; break;
      case AxisName::R: R = v; break;
    }
  }
  try {
    const auto model = DimensionlessModel::create(R, A);
    row.obs = compute_observables(model, req.kind, pair, req.spec);
    row.status = RowStatus::Ok;
  } catch (const StabilityViolation& e) {
    row.status = RowStatus::Unstable;
    row.message = e.what();
  } catch (const UnstableSpectrum& e) {
    row.status = RowStatus::Unstable;
    row.message = e.what();
  } catch (const Error& e) {
    row.status = RowStatus::QuadratureFailed;
    row.message = e.what();
  }
  return row;
}

SweepResult run_sweep(const SweepRequest& req, int workers) {
  req.validate();
  if (workers < 1) throw ConfigError("worker count must be >= 1");
  SweepResult result;
  result.request = req;
  result.workers = workers;
  result.timestamp = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const auto n = static_cast<std::ptrdiff_t>(req.point_count());
  result.rows.resize(n);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::ptrdiff_t i = 0; i < n; ++i) result.rows[i] = evaluate_point(req, static_cast<std::size_t>(i));
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

SweepResult run_sweep_serial(const SweepRequest& req) {
  req.validate();
  SweepResult result;
  result.request = req;
  result.workers = 1;
  result.timestamp = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = req.point_count();
  result.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) result.rows.push_back(evaluate_point(req, i));
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

int resolve_workers(std::optional<int> requested) {
  if (requested) {
    if (*requested < 1) throw UsageError("--workers must be >= 1");
    return *requested;
  }
  if (const char* env = std::getenv("HARVEST_WORKERS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096)
      throw ConfigError("HARVEST_WORKERS must be a positive integer (got '" + std::string(env) + "')");
    return static_cast<int>(v);
  }
  return omp_get_max_threads();
}

OptimumReport find_optimum(const SweepResult& result) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& r = result.rows[i];
    if (r.status != RowStatus::Ok) continue;
    if (!best || r.obs.concurrence > result.rows[*best].obs.concurrence) best = i;
  }
  if (!best) throw EmptyResult("sweep has no ok rows to optimize over");
  OptimumReport rep;
  rep.row_index = *best;
  rep.coords = result.rows[*best].coords;
  rep.max_concurrence = result.rows[*best].obs.concurrence;
  const auto& axes = result.request.axes;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const auto [lo, hi] = std::minmax_element(axes[k].values.begin(), axes[k].values.end());
    if (rep.coords[k] == *lo || rep.coords[k] == *hi) rep.on_boundary = true;
  }
  return rep;
}

}  // namespace harvest::sweep
