#include "doctest.h"

#include <cmath>

#include "gie/errors.hpp"
#include "gie/sweep.hpp"
#include "reference_oracle.hpp"

using namespace gie;
using namespace gie::sweep;

namespace {

SweepSpec base_spec() {
  SweepSpec s;
  s.name = "test";
  s.base.model = units::ModelParams::dimensionless(1.0 / 48.0, 1.0, 0.0);
  return s;
}

}  // namespace

TEST_CASE("axis grids") {
  SweepAxis lin{AxisParam::F, 0.0, 0.2, 5};
  CHECK(lin.grid() == std::vector<double>{0.0, 0.05, 0.1, 0.15000000000000002, 0.2});
  SweepAxis lg{AxisParam::Gamma, 1e-3, 1e-1, 3, AxisScale::Log};
  const auto g = lg.grid();
  CHECK(g[1] == doctest::Approx(1e-2));
  SweepAxis list{AxisParam::Delta, 0, 0, 2, AxisScale::List, {1.0, 0.5}};
  CHECK(list.grid() == std::vector<double>{1.0, 0.5});

  CHECK_THROWS_AS((SweepAxis{AxisParam::F, 0.0, 1.0, 1}.validate()), Error);
  CHECK_THROWS_AS((SweepAxis{AxisParam::F, 0.0, 1.0, 3, AxisScale::Log}.validate()), Error);
  CHECK_THROWS_AS(parse_axis_param("omega"), Error);
  CHECK(parse_axis_param(axis_param_name(AxisParam::GB)) == AxisParam::GB);
}

TEST_CASE("a drive sweep matches the closed form cell by cell") {
  SweepSpec spec = base_spec();
  spec.axes.push_back({AxisParam::F, 0.0, 0.24, 25});
  const SweepResult r = run_sweep(spec, 2);
  REQUIRE(r.cells.size() == 25);
  CHECK(r.invalid_cells == 0);
  for (const SweepCell& c : r.cells) {
    const double F = c.coords[0];
    const double s = 0.25 * std::log(1.0 / (1.0 - 4.0 * F));
    const double g_eff = 2.0 * (std::exp(s) / 48.0) * std::exp(s) / std::exp(-2.0 * s);
    const double t = 2.0 * units::kPi / std::exp(-2.0 * s);
    CHECK(c.s == doctest::Approx(s).epsilon(1e-12));
    CHECK(c.t == doctest::Approx(t).epsilon(1e-12));
    CHECK(c.en == doctest::Approx(reference::en_decoupled(g_eff, t)).epsilon(1e-9));
  }
}

TEST_CASE("unstable cells are recorded and the sweep continues") {
  SweepSpec spec = base_spec();
  spec.axes.push_back({AxisParam::F, 0.2, 0.3, 11});
  const SweepResult r = run_sweep(spec);
  CHECK(r.invalid_cells == 6);
  for (const SweepCell& c : r.cells) {
    if (c.coords[0] >= 0.25) {
      CHECK_FALSE(c.valid);
      CHECK(std::isnan(c.en));
      CHECK(c.error.rfind("UnstableFrameCell", 0) == 0);
    } else {
      CHECK(c.valid);
    }
  }
}

TEST_CASE("two-dimensional layout is row-major with the last axis fastest") {
  SweepSpec spec = base_spec();
  spec.axes.push_back({AxisParam::F, 0.0, 0.2, 3});
  spec.axes.push_back({AxisParam::Gamma, 0.0, 0.2, 4});
  const SweepResult r = run_sweep(spec);
  CHECK(r.shape == std::vector<std::size_t>{3, 4});
  CHECK(r.at({1, 2}).coords == std::vector<double>{r.axis_values[0][1], r.axis_values[1][2]});
  // Dephasing suppresses entanglement along every row.
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 1; j < 4; ++j) CHECK(r.at({i, j}).en <= r.at({i, j - 1}).en + 1e-15);
  }
}

TEST_CASE("mutually exclusive drive axes and duplicates are rejected") {
  SweepSpec spec = base_spec();
  spec.axes.push_back({AxisParam::F, 0.0, 0.2, 3});
  spec.axes.push_back({AxisParam::Delta, 0.5, 1.0, 3});
  CHECK_THROWS_AS(spec.validate(), Error);
  SweepSpec dup = base_spec();
  dup.axes.push_back({AxisParam::GB, 0.0, 1.0, 3});
  dup.axes.push_back({AxisParam::GB, 0.0, 1.0, 3});
  CHECK_THROWS_AS(dup.validate(), Error);
}

TEST_CASE("squeezing axis and fixed-time rule") {
  ModelPoint p;
  p.model = units::ModelParams::dimensionless(0.1, 1.0, 0.0);
  TimeRule rule;
  apply_axis(AxisParam::S, 0.3, p, rule);
  CHECK(units::derive_squeezed_frame(p.model).s == doctest::Approx(0.3).epsilon(1e-12));
  apply_axis(AxisParam::T, 2.5, p, rule);
  CHECK(rule.kind == TimeRule::Kind::Fixed);
  CHECK(rule.time_for(units::derive_squeezed_frame(p.model)) == 2.5);
}

TEST_CASE("finite differences are exact on quadratics") {
  std::vector<double> x, y;
  for (int k = 0; k <= 10; ++k) {
    x.push_back(0.1 * k);
    y.push_back(3.0 * x.back() * x.back() - x.back());
  }
  const auto d = finite_difference(x, y);
  for (std::size_t k = 1; k + 1 < x.size(); ++k) CHECK(d[k] == doctest::Approx(6.0 * x[k] - 1.0));
  CHECK_THROWS_AS(finite_difference({0.0, 1.0}, {0.0, 1.0}), Error);

  const auto z = zero_crossings({0.0, 1.0, 2.0, 3.0}, {-1.0, 1.0, 3.0, -1.0});
  REQUIRE(z.size() == 2);
  CHECK(z[0].g == doctest::Approx(0.5));
  CHECK(z[0].direction == +1);
  CHECK(z[1].g == doctest::Approx(2.75));
  CHECK(z[1].direction == -1);

  const auto on_grid = zero_crossings({0.0, 1.0, 2.0, 3.0, 4.0}, {1.0, 0.0, -1.0, 0.0, 0.0});
  REQUIRE(on_grid.size() == 1);
  CHECK(on_grid[0].g == 1.0);
  CHECK(on_grid[0].direction == -1);
}

TEST_CASE("entanglement rate along g_b follows the analytic derivative") {
  SweepSpec spec = base_spec();
  spec.base.dephasing.qubit = 0.1;
  spec.axes.push_back({AxisParam::GB, 0.0, 6.0, 601});
  const RateResult r = entanglement_rate(spec, RateVariable::GB);
  REQUIRE(r.lines.size() == 1);
  const RateLine& line = r.lines[0];
  // d/dg_b of EN at fixed t, by a much finer central difference.
  const auto en_at = [&](double gb) {
    auto f = units::derive_squeezed_frame(units::ModelParams::dimensionless(1.0 / 48.0, gb, 0.0));
    return analytic::en_at(f, {}, f.t_period, {0.1, 0.0});
  };
  for (std::size_t k = 50; k < 600; k += 50) {
    const double g = line.g[k], h = 1e-5;
    const double expected = (en_at(g + h) - en_at(g - h)) / (2.0 * h);
    CHECK(line.eta[k] == doctest::Approx(expected).epsilon(1e-3).scale(1.0));
  }
  // The entangling phase pi g_b / 6 peaks at g_b = 3.
  REQUIRE(line.zeros.size() == 1);
  CHECK(line.zeros[0].g == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(line.zeros[0].direction == -1);

  SweepSpec missing = base_spec();
  missing.axes.push_back({AxisParam::F, 0.0, 0.1, 5});
  CHECK_THROWS_AS(entanglement_rate(missing, RateVariable::GA), Error);
}

TEST_CASE("time series carries both backends") {
  TimeseriesSpec spec;
  spec.name = "ts";
  SeriesVariant v;
  v.label = "base";
  v.point.model = units::ModelParams::dimensionless(1.0 / 48.0, 1.0, 0.0);
  spec.variants.push_back(v);
  spec.t_grid = linspace(0.0, 2.0 * units::kPi, 9);
  const TimeseriesTable t = timeseries_figure(spec);
  REQUIRE(t.series.size() == 1);
  const SeriesColumns& s = t.series[0];
  REQUIRE(s.analytic.size() == 9);
  REQUIRE(s.oracle.size() == 9);
  for (std::size_t k = 0; k < 9; ++k) CHECK(std::fabs(s.analytic[k] - s.oracle[k].tp_qubit) < 1e-3);
  CHECK(s.analytic[0] == 0.0);

  spec.t_grid.clear();
  CHECK_THROWS_AS(timeseries_figure(spec), Error);
  CHECK_THROWS_AS(linspace(0.0, 1.0, 1), Error);
}
