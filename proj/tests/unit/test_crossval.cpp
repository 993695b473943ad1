#include "helpers.hpp"

using namespace nwtest;

namespace {

RectGrid rect_grid(double X, double dx, double t_final) {
  RectGrid g;
  g.x_min = -X;
  g.x_max = X;
  g.dx = dx;
  g.t_final = t_final;
  g.snapshot_times = {0.5 * t_final, t_final};
  return g;
}

}  // namespace

TEST_SUITE("crossval") {

TEST_CASE("rect grid validation") {
  const WaveProfile p = WaveProfile::zero();
  const auto d = RectInitialData::background(p);
  const auto m = Nonlinearity::linear();
  RectGrid g = rect_grid(1.0, 0.3, 0.5);  // 2/0.3 is not whole
  CHECK_THROWS_AS(rect_solve(d, m, g, p), Error);
  g = rect_grid(1.0, 0.1, 0.5);
  g.cfl = 0.5;
  try {
    (void)rect_solve(d, m, g, p);
    FAIL("expected CFLViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CFLViolation);
  }
  g.cfl = 0.4;
  g.snapshot_times = {0.7};
  CHECK_THROWS_AS(rect_solve(d, m, g, p), Error);
}

TEST_CASE("rect: per-step CFL check fires when the speed outgrows dt") {
  // membrane speeds exceed one on a steep simple wave; cfl at the limit leaves no room
  const WaveProfile p = WaveProfile::bump(0.8, 0.0, 2.0);
  RectGrid g = rect_grid(6.0, 0.1, 0.5);
  g.cfl = g.cfl_limit;
  try {
    const auto r = rect_solve(RectInitialData::background(p), Nonlinearity::membrane(), g, p);
    CHECK(r.max_speed * r.dt <= g.cfl_limit * g.dx * (1.0 + 1e-12));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CFLViolation);
  }
}

TEST_CASE("rect: linear model converges to d'Alembert at second order") {
  const WaveProfile p = WaveProfile::zero();
  const auto m = Nonlinearity::linear();
  const RectInitialData d = bump_data(p, 1e-2, 0.5, 1.5, 0.5);
  std::vector<double> errs;
  for (double dx : {0.1, 0.05, 0.025}) {
    RectGrid g = rect_grid(6.0, dx, 2.0);
    g.dissipation = 0.0;
    const auto r = rect_solve(d, m, g, p);
    double e = 0.0;
    for (const RectLevel& l : r.snapshots) {
      for (std::size_t k = 0; k < l.phi.size(); ++k) {
        const double x = r.grid.x(static_cast<int>(k));
        const auto ex = nwo::dalembert(1e-2, 0.5, 0.5, 1.5, l.t, x);
        e = std::max({e, std::abs(l.phi[k] - ex[0]), std::abs(l.Phi0[k] - ex[1]),
                      std::abs(l.Phi1[k] - ex[2])});
      }
    }
    errs.push_back(e);
  }
  MESSAGE("rect errors ", errs[0], " ", errs[1], " ", errs[2]);
  CHECK(nwo::order2(errs[1], errs[2]) >= 1.8);
  CHECK(errs[2] <= 3e-5);
}

TEST_CASE("rect: the simple wave is preserved") {
  const WaveProfile p = WaveProfile::bump(0.5, 0.0, 2.0);
  const auto m = Nonlinearity::membrane();
  std::vector<double> errs;
  for (double dx : {0.05, 0.025}) {
    const auto r = rect_solve(RectInitialData::background(p), m, rect_grid(6.0, dx, 2.0), p);
    double e = 0.0;
    for (const RectLevel& l : r.snapshots) {
      for (std::size_t k = 0; k < l.phi.size(); ++k) {
        const double x = r.grid.x(static_cast<int>(k));
        e = std::max({e, std::abs(l.phi[k] - p.zeta(l.t - x)),
                      std::abs(l.Phi0[k] - p.dzeta(l.t - x)), std::abs(l.Phi1[k] + p.dzeta(l.t - x))});
      }
    }
    errs.push_back(e);
  }
  MESSAGE("simple wave errors ", errs[0], " ", errs[1]);
  CHECK(errs[1] <= 1e-3 * p.M_zeta());
  CHECK(nwo::order2(errs[0], errs[1]) >= 1.8);
}

TEST_CASE("rect: parallel and serial agree bit for bit") {
  const WaveProfile p = WaveProfile::bump(0.5, 0.0, 2.0);
  const auto m = Nonlinearity::membrane();
  const auto d = bump_data(p, 1e-2);
  const RectGrid g = rect_grid(5.0, 0.05, 1.0);
  const auto a = rect_solve(d, m, g, p);
  const auto b = reference::rect_solve_serial(d, m, g, p);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t s = 0; s < a.snapshots.size(); ++s) {
    CHECK(a.snapshots[s].phi == b.snapshots[s].phi);
    CHECK(a.snapshots[s].Phi0 == b.snapshots[s].Phi0);
    CHECK(a.snapshots[s].Phi1 == b.snapshots[s].Phi1);
  }
  CHECK(a.tail[2].phi == b.tail[2].phi);
}

TEST_CASE("flux residual") {
  const WaveProfile p = WaveProfile::zero();
  const auto zero = rect_solve(RectInitialData::background(p), Nonlinearity::membrane(),
                               rect_grid(2.0, 0.1, 0.5), p);
  CHECK(flux_residual(zero, Nonlinearity::membrane()) == 0.0);
  const WaveProfile q = WaveProfile::bump(0.5, 0.0, 2.0);
  const auto m = Nonlinearity::membrane();
  std::vector<double> res;
  for (double dx : {0.1, 0.05, 0.025}) {
    res.push_back(flux_residual(rect_solve(bump_data(q, 1e-2), m, rect_grid(6.0, dx, 1.0), q), m));
  }
  MESSAGE("flux residuals ", res[0], " ", res[1], " ", res[2]);
  CHECK(nwo::order2(res[1], res[2]) >= 1.8);
}

TEST_CASE("pullback: simple wave comparison converges at second order") {
  const WaveProfile p = WaveProfile::bump(0.5, 0.0, 2.0);
  const auto m = Nonlinearity::membrane();
  const auto d = bump_data(p, 1e-3);
  std::vector<double> sup;
  for (double h : {0.1, 0.05}) {
    const auto pl = pipeline(d, p, m, 4.0, h);
    const auto r = rect_solve(d, m, rect_grid(9.0, h, 2.0), p);
    const auto c = pullback_compare(pl.state, pl.map, r, p, m);
    CHECK(c.points > 0);
    CHECK(c.outside > 0);
    sup.push_back(c.max_sup());
  }
  CHECK(nwo::order2(sup[0], sup[1]) == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("pullback: inversion round trip") {
  const WaveProfile p = WaveProfile::bump(0.5, 0.0, 2.0);
  const auto m = Nonlinearity::membrane();
  const auto pl = pipeline(bump_data(p, 1e-3), p, m, 3.0, 0.05);
  const DNGrid& g = pl.grid;
  for (auto [i, j] : {std::pair{80, 70}, {100, 100}, {50, 90}}) {
    const auto k = g.index(i, j);
    double u = NAN, ub = NAN;
    REQUIRE(invert_coords(pl.map, p, m, pl.map.t[k], pl.map.x[k], u, ub));
    CHECK(u == doctest::Approx(g.u(i)).epsilon(1e-10));
    CHECK(ub == doctest::Approx(g.ub(j)).epsilon(1e-10));
  }
  double u = NAN, ub = NAN;
  CHECK_FALSE(invert_coords(pl.map, p, m, -1.0, 0.0, u, ub));  // before the slice
}

TEST_CASE("pullback: no overlap is OutOfImage") {
  const WaveProfile p = WaveProfile::zero();
  const auto m = Nonlinearity::linear();
  const auto pl = pipeline(RectInitialData::background(p), p, m, 2.0, 0.1);
  RectGrid g = rect_grid(1.0, 0.1, 1.0);
  g.x_min = 20.0;
  g.x_max = 30.0;
  const auto r = rect_solve(RectInitialData::background(p), m, g, p);
  try {
    (void)pullback_compare(pl.state, pl.map, r, p, m);
    FAIL("expected OutOfImage");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfImage);
  }
}

TEST_CASE("phase shift") {
  const auto m = Nonlinearity::membrane();
  SUBCASE("vanishes for the pure simple wave") {
    const WaveProfile p = WaveProfile::bump(0.5, 0.0, 2.0);
    const auto pl = pipeline(RectInitialData::background(p), p, m, 4.0, 0.1);
    CHECK(std::abs(phase_shift(pl.map, p, m)) <= 1e-10);
  }
  SUBCASE("vanishes for the linear model") {
    const WaveProfile p = WaveProfile::zero();
    const auto pl = pipeline(bump_data(p, 1e-2), p, Nonlinearity::linear(), 4.0, 0.1);
    CHECK(std::abs(phase_shift(pl.map, p, Nonlinearity::linear())) <= 1e-12);
  }
  SUBCASE("is nonzero for a perturbed wave") {
    const WaveProfile p = WaveProfile::bump(0.5, 0.0, 2.0);
    const auto pl = pipeline(bump_data(p, 1e-2), p, m, 5.0, 0.1);
    const double s = phase_shift(pl.map, p, m);
    MESSAGE("phase shift ", s);
    CHECK(std::abs(s) > 1e-6);
  }
  SUBCASE("box too small") {
    const WaveProfile p = WaveProfile::bump(0.5, 0.0, 2.0);
    const auto pl = pipeline(RectInitialData::background(p), p, m, 1.0, 0.1);
    try {
      (void)phase_shift(pl.map, p, m);
      FAIL("expected InsufficientDomain");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InsufficientDomain);
    }
  }
}

}  // TEST_SUITE
