#include "harvest/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "harvest/errors.hpp"
#include "harvest/io.hpp"
#include "harvest/oracle.hpp"

namespace harvest::cli {
namespace {

using nlohmann::json;

constexpr const char* kCommandNames = "dispersion, stability, harvest, sweep, validate";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v)) throw UsageError(what + ": '" + text + "' is not a number");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// --- config files -----------------------------------------------------------

double json_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

int json_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<int>();
}

std::string json_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string axis_from_json(const json& a) {
  if (a.is_string()) return a.get<std::string>();
  if (!a.is_object()) throw ConfigError("config axes entries must be strings or objects");
  for (const auto& [k, v] : a.items()) {
    if (k != "name" && k != "min" && k != "max" && k != "count" && k != "spacing" && k != "values" && k[0] != '_')
      throw ConfigError("unknown key '" + k + "' in axis object");
  }
  if (!a.contains("name")) throw ConfigError("axis object needs a 'name'");
  const std::string name = json_string(a["name"], "axes.name");
  if (a.contains("values")) {
    if (!a["values"].is_array() || a["values"].empty()) throw ConfigError("axis 'values' must be a non-empty array");
    std::string text = name + "=";
    bool first = true;
    for (const auto& v : a["values"]) {
      if (!first) text += ',';
      text += io::format_double(json_number(v, "axes.values"));
      first = false;
    }
    return text;
  }
  for (const char* k : {"min", "max", "count"})
    if (!a.contains(k)) throw ConfigError("axis '" + name + "' needs 'values' or min/max/count");
  std::string text = name + ":" + io::format_double(json_number(a["min"], "axes.min")) + ":" +
                     io::format_double(json_number(a["max"], "axes.max")) + ":" +
                     std::to_string(json_int(a["count"], "axes.count"));
  if (a.contains("spacing")) text += ":" + json_string(a["spacing"], "axes.spacing");
  return text;
}

Settings settings_from_object(const json& j, bool allow_panels) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  Settings s;
  for (const auto& [key, v] : j.items()) {
    if (!key.empty() && key[0] == '_') continue;
    if (key == "panels") {
      if (!allow_panels) throw ConfigError("'panels' cannot be nested");
      continue;
    }
    if (key == "command") s.command = parse_command(json_string(v, key));
    else if (key == "R") s.R = json_number(v, key);
    else if (key == "A") s.A = json_number(v, key);
    else if (key == "m") s.m = json_number(v, key);
    else if (key == "omega_z") s.omega_z = json_number(v, key);
    else if (key == "g_c") s.g_c = json_number(v, key);
    else if (key == "g_d") s.g_d = json_number(v, key);
    else if (key == "rho0") s.rho0 = json_number(v, key);
    else if (key == "kind") s.kind = json_string(v, key);
    else if (key == "omega_gap") s.omega_gap = json_number(v, key);
    else if (key == "sigma") s.sigma = json_number(v, key);
    else if (key == "separation") s.separation = json_number(v, key);
    else if (key == "rel_tol") s.rel_tol = json_number(v, key);
    else if (key == "abs_tol") s.abs_tol = json_number(v, key);
    else if (key == "envelope_cutoff") s.envelope_cutoff = json_number(v, key);
    else if (key == "max_subdivisions") s.max_subdivisions = json_int(v, key);
    else if (key == "tail_lobes") s.tail_lobes = json_int(v, key);
    else if (key == "out") s.out = json_string(v, key);
    else if (key == "format") s.format = json_string(v, key);
    else if (key == "workers") s.workers = json_int(v, key);
    else if (key == "x_max") s.x_max = json_number(v, key);
    else if (key == "points") s.points = json_int(v, key);
    else if (key == "axes") {
      if (!v.is_array()) throw ConfigError("config key 'axes' must be an array");
      for (const auto& a : v) s.axes.push_back(axis_from_json(a));
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return s;
}

Settings load_config_file(const std::string& path, std::vector<Settings>& panels) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  panels = settings_from_json(j);
  return panels.front();
}

// --- resolution ---------------------------------------------------------------

void reject(bool present, const char* flag, Command c) {
  if (present) throw UsageError(std::string(flag) + " does not apply to the " + std::string(to_string(c)) + " command");
}

OutputFormat pick_format(const Settings& s, Command c) {
  if (s.format) {
    if (*s.format == "csv") return OutputFormat::Csv;
    if (*s.format == "json") return OutputFormat::Json;
    throw UsageError("--format must be csv or json (got '" + *s.format + "')");
  }
  if (s.out) {
    const std::string& o = *s.out;
    auto ends_with = [&o](const char* suf) {
      const std::string x(suf);
      return o.size() >= x.size() && o.compare(o.size() - x.size(), x.size(), x) == 0;
    };
    if (ends_with(".csv")) return OutputFormat::Csv;
    if (ends_with(".json")) return OutputFormat::Json;
  }
  return c == Command::Sweep ? OutputFormat::Csv : OutputFormat::Json;
}

bool has_axis(const std::vector<sweep::SweepAxis>& axes, sweep::AxisName n) {
  return std::any_of(axes.begin(), axes.end(), [n](const auto& a) { return a.name == n; });
}

// --- output -------------------------------------------------------------------

void emit(const RunConfig& cfg, const std::string& document, const std::string& summary, std::ostream& out,
          std::ostream& err) {
  if (cfg.out) {
    const std::filesystem::path p(*cfg.out);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    io::write_atomic(p, document);
    out << summary << " -> " << *cfg.out << '\n';
  } else {
    out << document;
    if (!document.empty() && document.back() != '\n') out << '\n';
    err << summary << '\n';
  }
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

DimensionlessModel build_model(const RunConfig& cfg) {
  if (cfg.physical) return nondimensionalize(*cfg.physical);
  return DimensionlessModel::create(cfg.R, cfg.A);
}

int run_dispersion(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<double> a_values;
  const bool a_axis = !cfg.axes.empty();
  if (a_axis)
    a_values = cfg.axes.front().values;
  else
    a_values.push_back(cfg.A);

  std::string csv = a_axis ? "A,x,f,omega\n" : "";
  json spectra = json::array();
  std::string summary = "dispersion: kind " + std::string(to_string(cfg.kind));
  for (double A : a_values) {
    const DimensionlessModel model = a_axis ? DimensionlessModel::create(cfg.R, A) : build_model(cfg);
    const auto report = dispersion::analyze_spectrum(model, cfg.kind, cfg.x_max, cfg.points);
    if (a_axis) {
      for (const auto& smp : report.samples)
        csv += io::format_double(A) + "," + io::format_double(smp.x) + "," + io::format_double(smp.f) + "," +
               io::format_double(smp.omega) + "\n";
    } else {
      csv = io::spectrum_csv(report);
    }
    spectra.push_back(io::spectrum_json(report, model, cfg.kind));
    summary += ", R=" + fmt(model.R()) + " A=" + fmt(model.A()) + ": ";
    summary += report.roton ? "roton at x=" + fmt(report.roton->x) + " f=" + fmt(report.roton->f)
                            : std::string(report.stable ? "stable, no roton" : "unstable");
  }
  std::string doc;
  if (cfg.format == OutputFormat::Csv)
    doc = csv;
  else
    doc = (a_axis ? json{{"spectra", spectra}} : spectra.front()).dump(2) + "\n";
  emit(cfg, doc, summary, out, err);
  return 0;
}

int run_stability(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto cp = dispersion::critical_point(cfg.R);
  std::string doc;
  if (cfg.format == OutputFormat::Csv) {
    doc = "R,A_c,x_min,min_radicand\n" + io::format_double(cfg.R) + "," + io::format_double(cp.A_c) + "," +
          io::format_double(cp.x_min) + "," + io::format_double(cp.min_radicand) + "\n";
  } else {
    doc = json{{"R", cfg.R},
               {"A_c", cp.A_c},
               {"x_min", cp.x_min},
               {"min_radicand", cp.min_radicand},
               {"gate_A_c", kCriticalA},
               {"version", io::version()}}
              .dump(2) +
          "\n";
  }
  emit(cfg, doc, "stability: A_c = " + fmt(cp.A_c, 8) + " at R = " + fmt(cfg.R, 8) + " (x_min = " + fmt(cp.x_min) + ")",
       out, err);
  return 0;
}

int run_harvest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const DimensionlessModel model = build_model(cfg);
  const HarvestObservables obs = compute_observables(model, cfg.kind, cfg.pair, cfg.spec);
  std::string doc;
  if (cfg.format == OutputFormat::Csv) {
    doc = "R,A,kind,omega_gap,sigma,separation,p,c,x_re,x_im,concurrence,p_err,c_err,x_err\n";
    doc += io::format_double(model.R()) + "," + io::format_double(model.A()) + "," + std::string(to_string(cfg.kind));
    for (double v : {cfg.pair.omega_gap, cfg.pair.sigma, cfg.pair.separation, obs.p_d, obs.c_elem, obs.x_elem.real(),
                     obs.x_elem.imag(), obs.concurrence, obs.est_errors.p, obs.est_errors.c, obs.est_errors.x})
      doc += "," + io::format_double(v);
    doc += "\n";
  } else {
    json j = io::observables_json(model, cfg.kind, cfg.pair, obs);
    if (const auto& sc = model.scales())
      j["scales"] = {{"c_0", sc->c_0}, {"M_star", sc->M_star}, {"d_z", sc->d_z}, {"g_eff", sc->g_eff}};
    j["quadrature"] = io::spec_json(cfg.spec);
    j["version"] = io::version();
    doc = j.dump(2) + "\n";
  }
  emit(cfg, doc,
       "harvest: P=" + fmt(obs.p_d) + " C=" + fmt(obs.c_elem) + " |X|=" + fmt(std::abs(obs.x_elem)) +
           " concurrence=" + fmt(obs.concurrence),
       out, err);
  return 0;
}

int run_sweep_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  sweep::SweepRequest req;
  req.R = cfg.R;
  req.A = cfg.A;
  req.kind = cfg.kind;
  req.base = cfg.pair;
  req.axes = cfg.axes;
  req.spec = cfg.spec;
  const int workers = sweep::resolve_workers(cfg.workers);
  const sweep::SweepResult result = sweep::run_sweep(req, workers);

  std::size_t ok = 0, unstable = 0, failed = 0;
  for (const auto& r : result.rows) {
    if (r.status == sweep::RowStatus::Ok) ++ok;
    else if (r.status == sweep::RowStatus::Unstable) ++unstable;
    else ++failed;
  }
  std::string summary = "sweep: " + std::to_string(result.rows.size()) + " rows (" + std::to_string(ok) + " ok, " +
                        std::to_string(unstable) + " unstable, " + std::to_string(failed) + " quadrature_failed) in " +
                        fmt(result.wall_seconds, 3) + " s on " + std::to_string(workers) + " worker(s)";
  if (ok > 0) {
    const auto opt = sweep::find_optimum(result);
    summary += "; max concurrence " + fmt(opt.max_concurrence) + " at";
    for (std::size_t k = 0; k < req.axes.size(); ++k)
      summary += " " + std::string(sweep::to_string(req.axes[k].name)) + "=" + fmt(opt.coords[k]);
    if (opt.on_boundary) summary += " (grid edge)";
  }
  const std::string doc =
      cfg.format == OutputFormat::Csv ? io::sweep_csv(result) : io::sweep_json(result).dump(2) + "\n";
  emit(cfg, doc, summary, out, err);
  return 0;
}

int run_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto checks = oracle::run_validation(oracle::preset_points(), cfg.spec);
  const auto passed = std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  std::string doc;
  if (cfg.format == OutputFormat::Csv) {
    doc = "point,observable,closed_form,oracle,rel_error,tolerance,pass\n";
    for (const auto& c : checks)
      doc += "\"" + c.label + "\"," + c.observable + "," + io::format_double(c.closed_form) + "," +
             io::format_double(c.oracle) + "," + io::format_double(c.rel_error) + "," +
             io::format_double(c.tolerance) + "," + (c.pass ? "true" : "false") + "\n";
  } else {
    json arr = json::array();
    for (const auto& c : checks)
      arr.push_back({{"point", c.label},
                     {"observable", c.observable},
                     {"closed_form", c.closed_form},
                     {"oracle", c.oracle},
                     {"rel_error", c.rel_error},
                     {"tolerance", c.tolerance},
                     {"pass", c.pass}});
    doc = json{{"checks", arr}, {"passed", passed}, {"total", checks.size()}}.dump(2) + "\n";
  }
  emit(cfg, doc, "validate: " + std::to_string(passed) + "/" + std::to_string(checks.size()) + " oracle checks passed",
       out, err);
  return passed == static_cast<long>(checks.size()) ? 0 : 1;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Dispersion: return "dispersion";
    case Command::Stability: return "stability";
    case Command::Harvest: return "harvest";
    case Command::Sweep: return "sweep";
    case Command::Validate: return "validate";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  if (name == "dispersion") return Command::Dispersion;
  if (name == "stability") return Command::Stability;
  if (name == "harvest") return Command::Harvest;
  if (name == "sweep") return Command::Sweep;
  if (name == "validate") return Command::Validate;
  throw UsageError("unknown command '" + std::string(name) + "' (expected " + kCommandNames + ")");
}

sweep::SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq != std::string::npos) {
    const auto name = sweep::parse_axis_name(trim(text.substr(0, eq)));
    std::vector<double> values;
    for (const auto& part : split(text.substr(eq + 1), ',')) values.push_back(parse_number(part, "--axis " + text));
    return sweep::SweepAxis::list(name, std::move(values));
  }
  const auto parts = split(text, ':');
  if (parts.size() != 4 && parts.size() != 5)
    throw UsageError("--axis '" + text + "': expected name:min:max:count[:log] or name=v1,v2,...");
  const auto name = sweep::parse_axis_name(trim(parts[0]));
  const double lo = parse_number(parts[1], "--axis " + text);
  const double hi = parse_number(parts[2], "--axis " + text);
  const double count = parse_number(parts[3], "--axis " + text);
  if (count != std::floor(count) || count < 1 || count > 1e7)
    throw UsageError("--axis '" + text + "': count must be a positive integer");
  sweep::Spacing spacing = sweep::Spacing::Linear;
  if (parts.size() == 5) {
    const std::string sp = trim(parts[4]);
    if (sp == "log") spacing = sweep::Spacing::Log;
    else if (sp != "linear") throw UsageError("--axis '" + text + "': spacing must be linear or log");
  }
  return sweep::SweepAxis::range(name, lo, hi, static_cast<int>(count), spacing);
}

std::vector<Settings> settings_from_json(const json& j) {
  const Settings base = settings_from_object(j, true);
  if (!j.contains("panels")) return {base};
  const json& panels = j["panels"];
  if (!panels.is_array() || panels.empty()) throw ConfigError("'panels' must be a non-empty array");
  std::vector<Settings> out;
  for (const auto& p : panels) out.push_back(merge(base, settings_from_object(p, false)));
  return out;
}

Settings merge(const Settings& base, const Settings& top) {
  Settings s = base;
  auto over = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  over(s.command, top.command);
  over(s.R, top.R);
  over(s.A, top.A);
  over(s.m, top.m);
  over(s.omega_z, top.omega_z);
  over(s.g_c, top.g_c);
  over(s.g_d, top.g_d);
  over(s.rho0, top.rho0);
  over(s.kind, top.kind);
  over(s.omega_gap, top.omega_gap);
  over(s.sigma, top.sigma);
  over(s.separation, top.separation);
  if (!top.axes.empty()) s.axes = top.axes;
  over(s.rel_tol, top.rel_tol);
  over(s.abs_tol, top.abs_tol);
  over(s.envelope_cutoff, top.envelope_cutoff);
  over(s.max_subdivisions, top.max_subdivisions);
  over(s.tail_lobes, top.tail_lobes);
  over(s.out, top.out);
  over(s.format, top.format);
  over(s.workers, top.workers);
  over(s.x_max, top.x_max);
  over(s.points, top.points);
  over(s.config, top.config);
  return s;
}

RunConfig resolve(const Settings& s) {
  if (!s.command) {
    // Still gate the model so bad parameters are reported as such.
    if (s.m || s.omega_z || s.g_c || s.g_d || s.rho0) {
      if (s.m && s.omega_z && s.g_c && s.g_d && s.rho0)
        (void)nondimensionalize(CondensateParams{*s.m, *s.omega_z, *s.g_c, *s.g_d, *s.rho0});
    } else if (s.R || s.A) {
      (void)DimensionlessModel::create(s.R.value_or(0.0), s.A.value_or(0.0));
    }
    throw UsageError(std::string("no command given (expected ") + kCommandNames + ")");
  }
  RunConfig cfg;
  const Command c = cfg.command = *s.command;

  const bool physical_any = s.m || s.omega_z || s.g_c || s.g_d || s.rho0;
  const bool model_any = physical_any || s.R || s.A || s.kind;
  const bool pair_any = s.omega_gap || s.sigma || s.separation;
  const bool quad_any = s.rel_tol || s.abs_tol || s.envelope_cutoff || s.max_subdivisions || s.tail_lobes;

  switch (c) {
    case Command::Stability:
      reject(physical_any, "physical parameters", c);
      reject(s.A.has_value(), "--A", c);
      reject(s.kind.has_value(), "--kind", c);
      reject(pair_any, "detector flags", c);
      reject(quad_any, "quadrature flags", c);
      reject(!s.axes.empty(), "--axis", c);
      reject(s.workers.has_value(), "--workers", c);
      reject(s.x_max || s.points, "--x-max/--points", c);
      break;
    case Command::Validate:
      reject(model_any, "model flags", c);
      reject(pair_any, "detector flags", c);
      reject(!s.axes.empty(), "--axis", c);
      reject(s.workers.has_value(), "--workers", c);
      reject(s.x_max || s.points, "--x-max/--points", c);
      break;
    case Command::Dispersion:
      reject(pair_any, "detector flags", c);
      reject(quad_any, "quadrature flags", c);
      reject(s.workers.has_value(), "--workers", c);
      break;
    case Command::Harvest:
      reject(!s.axes.empty(), "--axis", c);
      reject(s.workers.has_value(), "--workers", c);
      reject(s.x_max || s.points, "--x-max/--points", c);
      break;
    case Command::Sweep:
      reject(s.x_max || s.points, "--x-max/--points", c);
      break;
  }

  cfg.out = s.out;
  cfg.format = pick_format(s, c);
  cfg.workers = s.workers;

  if (c == Command::Stability) {
    if (!s.R) throw UsageError("stability needs --R");
    cfg.R = *s.R;
    if (!(cfg.R > 0) || cfg.R > kMaxR + 1e-12)
      throw InvalidParams("stability: --R must lie in (0, sqrt(pi/2)] = (0, 1.2533141]");
    return cfg;
  }

  quadrature::QuadratureSpec spec;
  if (s.rel_tol) spec.rel_tol = *s.rel_tol;
  if (s.abs_tol) spec.abs_tol = *s.abs_tol;
  if (s.envelope_cutoff) spec.envelope_cutoff = *s.envelope_cutoff;
  if (s.max_subdivisions) spec.max_subdivisions = *s.max_subdivisions;
  if (s.tail_lobes) spec.tail_lobes = *s.tail_lobes;
  spec.validate();
  cfg.spec = spec;

  if (c == Command::Validate) return cfg;

  cfg.kind = parse_dispersion_kind(s.kind.value_or("dipolar"));
  for (const auto& text : s.axes) cfg.axes.push_back(parse_axis(text));
  if (c == Command::Sweep && cfg.axes.empty()) throw UsageError("sweep needs at least one --axis");

  if (physical_any) {
    if (s.R || s.A) throw UsageError("give either --R/--A or the physical parameters, not both");
    const std::pair<const std::optional<double>*, const char*> need[] = {
        {&s.m, "--m"}, {&s.omega_z, "--omega-z"}, {&s.g_c, "--g-c"}, {&s.g_d, "--g-d"}, {&s.rho0, "--rho0"}};
    for (const auto& [v, flag] : need)
      if (!*v) throw UsageError(std::string("physical parameters need ") + flag);
    cfg.physical = CondensateParams{*s.m, *s.omega_z, *s.g_c, *s.g_d, *s.rho0};
    if (!cfg.axes.empty() && (has_axis(cfg.axes, sweep::AxisName::A) || has_axis(cfg.axes, sweep::AxisName::R)))
      throw UsageError("A or R axes need --R/--A, not physical parameters");
    const DimensionlessModel model = nondimensionalize(*cfg.physical);
    cfg.R = model.R();
    cfg.A = model.A();
  } else {
    const bool a_axis = has_axis(cfg.axes, sweep::AxisName::A);
    const bool r_axis = has_axis(cfg.axes, sweep::AxisName::R);
    if (cfg.kind == DispersionKind::DipolarBogoliubov) {
      if (!s.R && !r_axis) throw UsageError("--kind dipolar needs --R");
      if (!s.A && !a_axis) throw UsageError("--kind dipolar needs --A");
    }
    cfg.R = s.R.value_or(0.0);
    cfg.A = s.A.value_or(0.0);
    // The stability gate applies to the base model whenever it is actually used.
    if (!a_axis && !r_axis) (void)DimensionlessModel::create(cfg.R, cfg.A);
  }

  if (c == Command::Dispersion) {
    if (cfg.axes.size() > 1 || (cfg.axes.size() == 1 && cfg.axes.front().name != sweep::AxisName::A))
      throw UsageError("dispersion accepts at most one --axis, and only over A");
    if (!cfg.axes.empty() && cfg.kind != DispersionKind::DipolarBogoliubov)
      throw UsageError("an A axis needs --kind dipolar");
    if (!cfg.axes.empty() && cfg.physical) throw UsageError("an A axis needs --R, not physical parameters");
    cfg.x_max = s.x_max.value_or(10.0);
    cfg.points = s.points.value_or(201);
    if (!(cfg.x_max > 0) || cfg.points < 16) throw UsageError("--x-max must be > 0 and --points >= 16");
    return cfg;
  }

  // harvest and sweep need a detector pair; sweep axes may stand in for it.
  auto pick = [&](const std::optional<double>& v, sweep::AxisName axis, const char* flag) {
    if (v) return *v;
    if (c == Command::Sweep && has_axis(cfg.axes, axis)) return 0.0;
    throw UsageError(std::string(to_string(c)) + " needs " + flag);
  };
  cfg.pair.omega_gap = pick(s.omega_gap, sweep::AxisName::OmegaGap, "--omega-gap");
  cfg.pair.sigma = pick(s.sigma, sweep::AxisName::Sigma, "--sigma");
  cfg.pair.separation = pick(s.separation, sweep::AxisName::Separation, "--separation");
  if (c == Command::Sweep && !s.sigma) cfg.pair.sigma = 1.0;  // placeholder, every row overrides it
  if (c == Command::Sweep && !s.separation) cfg.pair.separation = 1.0;
  cfg.pair.validate();
  if (c == Command::Harvest && cfg.pair.separation == 0.0)
    throw CoincidentDetectorsUnregularized("harvest needs --separation > 0");
  if (c == Command::Sweep) {
    sweep::SweepRequest req{cfg.R, cfg.A, cfg.kind, cfg.pair, cfg.axes, cfg.spec};
    req.validate();
  }
  return cfg;
}

std::optional<Settings> parse_flags(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Entanglement harvesting between two static detectors in a quasi-2D dipolar condensate.\n"
               "All quantities are dimensionless (c0 = M* = 1).",
               "harvest"};
  app.set_help_all_flag("--help-all", "Print help for every command");
  app.require_subcommand(0, 1);
  Settings s;
  std::string format_flag;

  auto add_config = [&s](CLI::App* a) {
    a->add_option("--config", s.config, "JSON config file (flag names with underscores); explicit flags win");
  };
  auto add_model = [&s](CLI::App* a) {
    a->add_option("--R", s.R, "Interaction ratio R in [0, sqrt(pi/2)]")->group("Model");
    a->add_option("--A", s.A, "Dimensionless chemical potential A >= 0")->group("Model");
    a->add_option("--m", s.m, "Atomic mass (physical form, hbar = 1)")->group("Model");
    a->add_option("--omega-z", s.omega_z, "Transverse trap frequency")->group("Model");
    a->add_option("--g-c", s.g_c, "Contact coupling")->group("Model");
    a->add_option("--g-d", s.g_d, "Dipolar coupling")->group("Model");
    a->add_option("--rho0", s.rho0, "2D condensate density")->group("Model");
    a->add_option("--kind", s.kind, "Dispersion: li, contact or dipolar (default dipolar)")
        ->check(CLI::IsMember({"li", "contact", "dipolar"}))
        ->group("Model");
  };
  auto add_pair = [&s](CLI::App* a) {
    a->add_option("--omega-gap", s.omega_gap, "Detector gap Omega/M*")->group("Detectors");
    a->add_option("--sigma", s.sigma, "Switching width sigma*M*")->group("Detectors");
    a->add_option("--separation", s.separation, "Separation M*L/c0")->group("Detectors");
  };
  auto add_quad = [&s](CLI::App* a) {
    a->add_option("--rel-tol", s.rel_tol, "Relative quadrature tolerance (default 1e-9)")->group("Quadrature");
    a->add_option("--abs-tol", s.abs_tol, "Absolute quadrature tolerance (default 1e-14)")->group("Quadrature");
    a->add_option("--max-subdivisions", s.max_subdivisions, "Adaptive subdivision limit (default 2000)")
        ->group("Quadrature");
    a->add_option("--tail-lobes", s.tail_lobes, "Bessel lobes before giving up (default 60)")->group("Quadrature");
    a->add_option("--envelope-cutoff", s.envelope_cutoff, "Gaussian cut in standard deviations (default 8)")
        ->group("Quadrature");
  };
  auto add_output = [&s](CLI::App* a) {
    a->add_option("--out", s.out, "Output file, written atomically; stdout if omitted")->group("Output");
    a->add_option("--format", s.format, "csv or json (default: from --out extension, else csv for sweep, json)")
        ->check(CLI::IsMember({"csv", "json"}))
        ->group("Output");
  };
  auto add_axis = [&s](CLI::App* a, const char* help) {
    a->add_option("--axis", s.axes, help)
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->group("Sweep");
  };

  add_config(&app);
  add_model(&app);

  auto* disp = app.add_subcommand("dispersion", "Sample f(x) and omega(x), locate the roton");
  add_config(disp);
  add_model(disp);
  disp->add_option("--x-max", s.x_max, "Largest x sampled (default 10)");
  disp->add_option("--points", s.points, "Number of samples (default 201)");
  add_axis(disp, "A values, e.g. A=1,2,3.4 (one spectrum each)");
  add_output(disp);

  auto* stab = app.add_subcommand("stability", "Critical A at which the spectrum goes unstable");
  add_config(stab);
  stab->add_option("--R", s.R, "Interaction ratio R in (0, sqrt(pi/2)]");
  add_output(stab);

  auto* harv = app.add_subcommand("harvest", "P, C, X and concurrence at one point");
  add_config(harv);
  add_model(harv);
  add_pair(harv);
  add_quad(harv);
  add_output(harv);

  auto* swp = app.add_subcommand("sweep", "Observables over a parameter grid");
  add_config(swp);
  add_model(swp);
  add_pair(swp);
  add_axis(swp, "name:min:max:count[:log] or name=v1,v2,... (repeatable; names omega_gap, separation, sigma, A, R)");
  add_quad(swp);
  add_output(swp);
  swp->add_option("--workers", s.workers, "Worker threads (overrides HARVEST_WORKERS)")->group("Sweep");

  auto* val = app.add_subcommand("validate", "Compare closed forms with time-domain oracles at preset points");
  add_config(val);
  add_quad(val);
  add_output(val);

  std::vector<const char*> argv{"harvest"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ExtrasError&) {
    std::vector<std::string> extra = app.remaining();
    for (auto* sub : app.get_subcommands()) {
      const auto more = sub->remaining();
      extra.insert(extra.end(), more.begin(), more.end());
    }
    std::string msg = "unrecognized argument(s):";
    for (const auto& e : extra) msg += " " + e;
    throw UsageError(msg + " (see --help)");
  } catch (const CLI::ParseError& e) {
    // Subcommand help is raised from inside the subcommand.
    if (e.get_exit_code() == 0) {
      for (auto* sub : app.get_subcommands())
        if (sub->parsed()) {
          out << sub->help();
          return std::nullopt;
        }
      out << app.help();
      return std::nullopt;
    }
    throw UsageError(e.what());
  }
  for (auto* sub : app.get_subcommands()) s.command = parse_command(sub->get_name());
  return s;
}

std::vector<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out) {
  const auto flags = parse_flags(args, out);
  if (!flags) return {};
  std::vector<Settings> panels{Settings{}};
  if (flags->config) load_config_file(*flags->config, panels);
  if (panels.size() > 1 && flags->out) throw UsageError("--out cannot be combined with a multi-panel config");
  std::vector<RunConfig> runs;
  for (const Settings& panel : panels) {
    if (flags->command && panel.command && *flags->command != *panel.command)
      throw UsageError("command '" + std::string(to_string(*flags->command)) + "' conflicts with config command '" +
                       std::string(to_string(*panel.command)) + "'");
    runs.push_back(resolve(merge(panel, *flags)));
  }
  return runs;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.command) {
    case Command::Dispersion: return run_dispersion(config, out, err);
    case Command::Stability: return run_stability(config, out, err);
    case Command::Harvest: return run_harvest(config, out, err);
    case Command::Sweep: return run_sweep_command(config, out, err);
    case Command::Validate: return run_validate(config, out, err);
  }
  return 2;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto runs = parse_args(args, out);
    int code = 0;
    for (const RunConfig& r : runs) code = std::max(code, run(r, out, err));
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.error_class() == ErrorClass::Validation ? 2 : 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace harvest::cli
