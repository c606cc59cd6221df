#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harvest/dispersion.hpp"
#include "harvest/harvesting.hpp"
#include "harvest/quadrature.hpp"

namespace harvest::sweep {

enum class AxisName { OmegaGap, Separation, Sigma, A, R };
std::string_view to_string(AxisName name);
AxisName parse_axis_name(std::string_view name);

enum class Spacing { Explicit, Linear, Log };
std::string_view to_string(Spacing s);

struct SweepAxis {
  AxisName name = AxisName::OmegaGap;
  std::vector<double> values;
  Spacing spacing = Spacing::Explicit;

  static SweepAxis range(AxisName name, double min, double max, int count, Spacing spacing = Spacing::Linear);
  static SweepAxis list(AxisName name, std::vector<double> values);
};

struct SweepRequest {
  double R = 0.0;
  double A = 0.0;
  DispersionKind kind = DispersionKind::LorentzInvariantIdeal;
  DetectorPair base;
  std::vector<SweepAxis> axes;
  quadrature::QuadratureSpec spec;

  /// Throws ConfigError for malformed axes or axis values outside their domains.
  void validate() const;
  std::size_t point_count() const;
};

enum class RowStatus { Ok, Unstable, QuadratureFailed };
std::string_view to_string(RowStatus s);

struct SweepRow {
  std::vector<double> coords;  // one value per axis, declaration order
  RowStatus status = RowStatus::Ok;
  HarvestObservables obs;      // meaningful only when status == Ok
  std::string message;         // failure reason otherwise
};

struct SweepResult {
  SweepRequest request;
  std::vector<SweepRow> rows;  // row-major, last axis fastest
  int workers = 1;
  double wall_seconds = 0.0;
  std::string timestamp;       // ISO-8601 UTC, set when the sweep starts
};

/// Evaluates one grid point; failures become row statuses.
SweepRow evaluate_point(const SweepRequest& req, std::size_t index);

/// OpenMP map over the grid with `workers` threads.
SweepResult run_sweep(const SweepRequest& req, int workers);
/// Single-threaded reference; same rows as run_sweep.
SweepResult run_sweep_serial(const SweepRequest& req);

/// Explicit request, else HARVEST_WORKERS, else the OpenMP default.
int resolve_workers(std::optional<int> requested);

struct OptimumReport {
  std::size_t row_index = 0;
  std::vector<double> coords;
  double max_concurrence = 0.0;
  bool on_boundary = false;
};

/// Argmax of concurrence over ok rows; the earliest row wins ties.
OptimumReport find_optimum(const SweepResult& result);

}  // namespace harvest::sweep
