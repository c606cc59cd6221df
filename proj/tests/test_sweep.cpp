#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "harvest/errors.hpp"
#include "harvest/io.hpp"
#include "harvest/sweep.hpp"

using namespace harvest;
using namespace harvest::sweep;

namespace {

SweepRequest small_grid(DispersionKind kind = DispersionKind::LorentzInvariantIdeal) {
  SweepRequest req;
  req.R = kind == DispersionKind::DipolarBogoliubov ? kMaxR : 0.0;
  req.A = 1.0;
  req.kind = kind;
  req.base = {0.5, 5.0, 1.0};
  req.axes = {SweepAxis::list(AxisName::OmegaGap, {0.5, 1.0}), SweepAxis::list(AxisName::Separation, {1.0, 2.0})};
  return req;
}

SweepRow ok_row(std::vector<double> coords, double c) {
  SweepRow r;
  r.coords = std::move(coords);
  r.obs.concurrence = c;
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("axis construction") {
  const auto lin = SweepAxis::range(AxisName::OmegaGap, 0.01, 2.0, 100);
  REQUIRE(lin.values.size() == 100);
  CHECK(lin.values.front() == 0.01);
  CHECK(lin.values.back() == 2.0);
  const auto lg = SweepAxis::range(AxisName::Sigma, 0.1, 10.0, 3, Spacing::Log);
  CHECK(lg.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(SweepAxis::range(AxisName::A, 2.0, 2.0, 1).values == std::vector<double>{2.0});
  CHECK_THROWS_AS(SweepAxis::range(AxisName::A, 2.0, 1.0, 5), ConfigError);
  CHECK_THROWS_AS(SweepAxis::range(AxisName::A, 1.0, 2.0, 0), ConfigError);
  CHECK_THROWS_AS(SweepAxis::range(AxisName::Sigma, 0.0, 2.0, 4, Spacing::Log), ConfigError);
  CHECK(parse_axis_name("omega_gap") == AxisName::OmegaGap);
  CHECK_THROWS_AS(parse_axis_name("gap"), ConfigError);
}

TEST_CASE("request validation") {
  auto req = small_grid();
  CHECK_NOTHROW(req.validate());
  CHECK(req.point_count() == 4);

  auto dup = req;
  dup.axes.push_back(SweepAxis::list(AxisName::OmegaGap, {0.1}));
  CHECK_THROWS_AS(dup.validate(), ConfigError);

  auto a_axis = req;
  a_axis.axes = {SweepAxis::list(AxisName::A, {1.0, 2.0})};
  CHECK_THROWS_AS(a_axis.validate(), ConfigError);
  a_axis.kind = DispersionKind::DipolarBogoliubov;
  a_axis.R = kMaxR;
  CHECK_NOTHROW(a_axis.validate());

  auto neg = req;
  neg.axes = {SweepAxis::list(AxisName::Sigma, {1.0, -1.0})};
  CHECK_THROWS_AS(neg.validate(), ConfigError);
  neg.axes = {SweepAxis::list(AxisName::Separation, {0.0})};
  CHECK_THROWS_AS(neg.validate(), ConfigError);

  auto empty = req;
  empty.axes = {};
  CHECK_THROWS_AS(empty.validate(), ConfigError);
}

TEST_CASE("2x2 grid in row-major order") {
  const auto res = run_sweep(small_grid(), 1);
  REQUIRE(res.rows.size() == 4);
  const std::vector<std::vector<double>> expect{{0.5, 1.0}, {0.5, 2.0}, {1.0, 1.0}, {1.0, 2.0}};
  for (int i = 0; i < 4; ++i) {
    CHECK(res.rows[i].coords == expect[i]);
    CHECK(res.rows[i].status == RowStatus::Ok);
  }
  const auto direct = compute_observables(DimensionlessModel::create(0.0, 1.0), DispersionKind::LorentzInvariantIdeal,
                                          {1.0, 5.0, 2.0});
  CHECK(res.rows[3].obs.concurrence == direct.concurrence);
  CHECK(res.rows[3].obs.p_d == direct.p_d);
}

TEST_CASE("worker count does not change the output") {
  const auto req = small_grid(DispersionKind::DipolarBogoliubov);
  const std::string serial = io::sweep_csv(run_sweep_serial(req));
  for (int w : {1, 2, 8}) CHECK(io::sweep_csv(run_sweep(req, w)) == serial);
}

TEST_CASE("A axis crossing the instability keeps going") {
  SweepRequest req = small_grid(DispersionKind::DipolarBogoliubov);
  req.R = 1.25;  // below dipole dominance, so A is not gated
  req.axes = {SweepAxis::list(AxisName::A, {1.0, 10.0, 2.0})};
  const auto res = run_sweep(req, 2);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].status == RowStatus::Ok);
  CHECK(res.rows[1].status == RowStatus::Unstable);
  CHECK(!res.rows[1].message.empty());
  CHECK(res.rows[2].status == RowStatus::Ok);

  req.R = kMaxR;
  req.axes = {SweepAxis::list(AxisName::A, {3.0, 3.5})};
  CHECK(run_sweep(req, 1).rows[1].status == RowStatus::Unstable);
}

TEST_CASE("quadrature failures become row statuses") {
  SweepRequest req = small_grid(DispersionKind::DipolarBogoliubov);
  req.spec.max_subdivisions = 1;
  req.spec.rel_tol = 1e-13;
  const auto res = run_sweep(req, 1);
  for (const auto& r : res.rows) CHECK(r.status == RowStatus::QuadratureFailed);
  CHECK_THROWS_AS(find_optimum(res), EmptyResult);
}

TEST_CASE("optimum selection") {
  SweepResult r;
  r.request.axes = {SweepAxis::list(AxisName::OmegaGap, {0.1, 0.2, 0.3})};
  r.rows = {ok_row({0.1}, 0.0), ok_row({0.2}, 0.3), ok_row({0.3}, 0.3)};
  auto o = find_optimum(r);
  CHECK(o.row_index == 1);
  CHECK(o.max_concurrence == 0.3);
  CHECK(!o.on_boundary);

  r.rows[1].status = RowStatus::Unstable;
  o = find_optimum(r);
  CHECK(o.row_index == 2);
  CHECK(o.on_boundary);

  SweepResult one;
  one.request.axes = {SweepAxis::list(AxisName::OmegaGap, {0.1})};
  one.rows = {ok_row({0.1}, 0.0)};
  o = find_optimum(one);
  CHECK(o.row_index == 0);
  CHECK(o.on_boundary);
}

TEST_CASE("worker resolution") {
  CHECK(resolve_workers(3) == 3);
  ::setenv("HARVEST_WORKERS", "5", 1);
  CHECK(resolve_workers(std::nullopt) == 5);
  CHECK(resolve_workers(2) == 2);
  ::setenv("HARVEST_WORKERS", "zero", 1);
  CHECK_THROWS_AS(resolve_workers(std::nullopt), ConfigError);
  ::unsetenv("HARVEST_WORKERS");
  CHECK(resolve_workers(std::nullopt) >= 1);
  CHECK_THROWS_AS(resolve_workers(0), UsageError);
}

TEST_CASE("sweep CSV layout") {
  SweepRequest req = small_grid(DispersionKind::DipolarBogoliubov);
  req.R = 1.25;
  req.axes = {SweepAxis::list(AxisName::A, {1.0, 10.0})};
  const auto res = run_sweep(req, 1);
  const auto ls = lines(io::sweep_csv(res));
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "A,p,c,x_re,x_im,concurrence,p_err,x_err,status");
  CHECK(ls[1].substr(0, 2) == "1,");
  CHECK(ls[1].substr(ls[1].size() - 3) == ",ok");
  CHECK(ls[2] == "10,,,,,,,,unstable");

  // 17 significant digits round-trip.
  const double p = res.rows[0].obs.p_d;
  CHECK(std::stod(io::format_double(p)) == p);
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("sweep JSON metadata") {
  const auto res = run_sweep(small_grid(), 1);
  const auto j = io::sweep_json(res);
  CHECK(j["metadata"]["kind"] == "li");
  CHECK(j["metadata"]["version"] == std::string(io::version()));
  CHECK(j["metadata"]["quadrature"]["rel_tol"] == 1e-9);
  CHECK(j["metadata"]["timestamp"].get<std::string>().back() == 'Z');
  CHECK(j["metadata"].contains("wall_seconds"));
  REQUIRE(j["rows"].size() == 4);
  CHECK(j["rows"][0]["status"] == "ok");
  CHECK(j["rows"][3]["concurrence"] == res.rows[3].obs.concurrence);
}

TEST_CASE("spectrum CSV") {
  const auto report = dispersion::analyze_spectrum(DimensionlessModel::create(0.0, 1.0),
                                                   DispersionKind::ContactBogoliubov, 10.0, 201);
  const auto ls = lines(io::spectrum_csv(report));
  CHECK(ls[0] == "x,f,omega");
  CHECK(ls.size() == 202);
  // x = 2 is sample 40.
  std::istringstream row(ls[41]);
  std::string x, f;
  std::getline(row, x, ',');
  std::getline(row, f, ',');
  CHECK(std::stod(x) == 2.0);
  CHECK(std::stod(f) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("atomic write") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "harvest_atomic_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path target = dir / "out.csv";
  io::write_atomic(target, "first\n");
  io::write_atomic(target, "second\n");
  std::ifstream in(target);
  std::string s((std::istreambuf_iterator<char>(in)), {});
  CHECK(s == "second\n");
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS_AS(io::write_atomic(dir / "missing" / "x.csv", "x"), ConfigError);
  fs::remove_all(dir);
}
