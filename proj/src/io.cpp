#include "harvest/io.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "harvest/errors.hpp"

#ifndef HARVEST_VERSION
#define HARVEST_VERSION "0.0.0"
#endif

namespace harvest::io {
namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string_view version() { return HARVEST_VERSION; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string spectrum_csv(const dispersion::SpectrumReport& report) {
  std::string out = "x,f,omega\n";
  for (const auto& s : report.samples) {
    out += format_double(s.x);
    out += ',';
    out += format_double(s.f);
    out += ',';
    out += format_double(s.omega);
    out += '\n';
  }
  return out;
}

json spectrum_json(const dispersion::SpectrumReport& report, const DimensionlessModel& model, DispersionKind kind) {
  json samples = json::array();
  for (const auto& s : report.samples) samples.push_back({{"x", s.x}, {"f", s.f}, {"omega", s.omega}});
  json j = {{"model", {{"R", model.R()}, {"A", model.A()}}},
            {"kind", to_string(kind)},
            {"stable", report.stable},
            {"min_f2", report.min_f2},
            {"roton", nullptr},
            {"crossover_x", nullptr},
            {"samples", samples},
            {"version", version()}};
  if (report.roton) j["roton"] = {{"x", report.roton->x}, {"f", report.roton->f}};
  if (report.crossover_x) j["crossover_x"] = *report.crossover_x;
  return j;
}

json spec_json(const quadrature::QuadratureSpec& spec) {
  return {{"rel_tol", spec.rel_tol},
          {"abs_tol", spec.abs_tol},
          {"max_subdivisions", spec.max_subdivisions},
          {"tail_lobes", spec.tail_lobes},
          {"envelope_cutoff", spec.envelope_cutoff}};
}

json observables_json(const DimensionlessModel& model, DispersionKind kind, const DetectorPair& pair,
                      const HarvestObservables& obs) {
  return {{"R", model.R()},
          {"A", model.A()},
          {"kind", to_string(kind)},
          {"omega_gap", pair.omega_gap},
          {"sigma", pair.sigma},
          {"separation", pair.separation},
          {"units", "lambda^2 rho_0 / c_0^2"},
          {"p", number_or_null(obs.p_d)},
          {"c", number_or_null(obs.c_elem)},
          {"x_re", number_or_null(obs.x_elem.real())},
          {"x_im", number_or_null(obs.x_elem.imag())},
          {"concurrence", number_or_null(obs.concurrence)},
          {"est_errors", {{"p", obs.est_errors.p}, {"c", obs.est_errors.c}, {"x", obs.est_errors.x}}}};
}

std::string sweep_csv(const sweep::SweepResult& result) {
  std::string out;
  for (const auto& axis : result.request.axes) {
    out += sweep::to_string(axis.name);
    out += ',';
  }
  out += "p,c,x_re,x_im,concurrence,p_err,x_err,status\n";
  for (const auto& row : result.rows) {
    for (double v : row.coords) {
      out += format_double(v);
      out += ',';
    }
    if (row.status == sweep::RowStatus::Ok) {
      const auto& o = row.obs;
      for (double v : {o.p_d, o.c_elem, o.x_elem.real(), o.x_elem.imag(), o.concurrence, o.est_errors.p,
                       o.est_errors.x}) {
        out += format_double(v);
        out += ',';
      }
    } else {
      out += ",,,,,,,";
    }
    out += sweep::to_string(row.status);
    out += '\n';
  }
  return out;
}

json sweep_json(const sweep::SweepResult& result) {
  const auto& req = result.request;
  json axes = json::array();
  for (const auto& a : req.axes)
    axes.push_back({{"name", sweep::to_string(a.name)}, {"spacing", sweep::to_string(a.spacing)}, {"values", a.values}});
  json rows = json::array();
  for (const auto& row : result.rows) {
    json r = json::object();
    for (std::size_t k = 0; k < req.axes.size(); ++k) r[std::string(sweep::to_string(req.axes[k].name))] = row.coords[k];
    r["status"] = sweep::to_string(row.status);
    if (row.status == sweep::RowStatus::Ok) {
      const auto& o = row.obs;
      r["p"] = o.p_d;
      r["c"] = o.c_elem;
      r["x_re"] = o.x_elem.real();
      r["x_im"] = o.x_elem.imag();
      r["concurrence"] = o.concurrence;
      r["p_err"] = o.est_errors.p;
      r["c_err"] = o.est_errors.c;
      r["x_err"] = o.est_errors.x;
    } else {
      r["message"] = row.message;
    }
    rows.push_back(std::move(r));
  }
  json meta = {{"model", {{"R", req.R}, {"A", req.A}}},
               {"kind", to_string(req.kind)},
               {"base_pair",
                {{"omega_gap", req.base.omega_gap}, {"sigma", req.base.sigma}, {"separation", req.base.separation}}},
               {"quadrature", spec_json(req.spec)},
               {"units", "lambda^2 rho_0 / c_0^2"},
               {"version", version()},
               {"timestamp", result.timestamp},
               {"wall_seconds", result.wall_seconds},
               {"workers", result.workers}};
  return {{"metadata", meta}, {"axes", axes}, {"rows", rows}};
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw ConfigError("cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

}  // namespace harvest::io
