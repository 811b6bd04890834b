#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "kpp/errors.hpp"
#include "kpp/fronttrack.hpp"
#include "kpp/solver.hpp"
#include "kpp/theory.hpp"

using namespace kpp;
using namespace kpp::solver;
using kpp::media::Medium;
using kpp::media::PeriodicProfile;
using kpp::media::PhaseMap;

namespace {

Medium constant_medium(double m, double x_max) {
  return Medium::composed(PeriodicProfile::constant(m), PhaseMap::affine(1.0), x_max);
}

double trapezoid_mass(const Field& f) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < f.u.size(); ++i) s += 0.5 * (f.u[i] + f.u[i + 1]);
  return s * f.grid.h();
}

}  // namespace

TEST_CASE("equilibria are preserved") {
  const Grid grid(100.0, 1000);
  const auto med = constant_medium(1.0, 100.0);
  const Stepper stepper(med, grid, {0.02, std::nullopt});
  for (double level : {0.0, 1.0}) {
    Field f{grid, std::vector<double>(grid.nodes(), level), 0.0};
    stepper.startup_step(f);
    for (int i = 0; i < 50; ++i) stepper.step(f);
    for (double v : f.u) CHECK(std::abs(v - level) <= 1e-14);
    CHECK(f.t == doctest::Approx(51 * 0.02));
  }
}

TEST_CASE("mass grows while the bump is below 1") {
  const Grid grid(100.0, 1000);
  const auto med = constant_medium(1.0, 100.0);
  const Stepper stepper(med, grid, {0.01, std::nullopt});
  Field f{grid, std::vector<double>(grid.nodes(), 0.0), 0.0};
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    f.u[i] = 0.3 * std::exp(-std::pow(grid.x(i) - 5.0, 2));
  }
  double mass = trapezoid_mass(f);
  stepper.startup_step(f);
  for (int s = 0; s < 300; ++s) {
    const double next = trapezoid_mass(f);
    CHECK(next > mass);
    mass = next;
    if (*std::max_element(f.u.begin(), f.u.end()) >= 1.0) break;
    stepper.step(f);
  }
}

TEST_CASE("discrete comparison principle on random ordered pairs") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Grid grid(60.0, 600);  // h = 0.1
  const std::vector<Medium> media{
      constant_medium(1.0, 60.0),
      Medium::composed(PeriodicProfile::cosine(2.0, 1.0), PhaseMap::power(0.5), 60.0)};
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto& med = media[trial % 2];
    const Stepper stepper(med, grid, {0.01, 20.0});
    Field lo{grid, std::vector<double>(grid.nodes()), 0.0};
    Field hi = lo;
    const double width = 1.0 + 5.0 * unit(rng);
    for (std::size_t i = 0; i < lo.u.size(); ++i) {
      const double bump = std::exp(-std::pow((grid.x(i) - 3.0) / width, 2));
      hi.u[i] = std::min(1.0, bump * (0.5 + 0.5 * unit(rng)));
      lo.u[i] = hi.u[i] * unit(rng);
    }
    stepper.startup_step(lo);
    stepper.startup_step(hi);
    for (int s = 0; s < 400; ++s) {
      stepper.step(lo);
      stepper.step(hi);
      for (std::size_t i = 0; i < lo.u.size(); ++i) {
        worst = std::max(worst, lo.u[i] - hi.u[i]);
        CHECK(lo.u[i] >= 0.0);
        CHECK(hi.u[i] <= 1.0 + 1e-12);
      }
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("stepper preconditions") {
  const Grid grid(100.0, 1000);
  CHECK_THROWS_AS(Stepper(constant_medium(4.0, 100.0), grid, {0.06, std::nullopt}), ParameterError);
  CHECK_THROWS_AS(Stepper(constant_medium(1.0, 100.0), grid, {0.02, 10.0}), ParameterError);
  CHECK_THROWS_AS(Stepper(constant_medium(1.0, 90.0), grid, {0.02, std::nullopt}), ParameterError);
  CHECK_THROWS_AS(Stepper(constant_medium(1.0, 100.0), grid, {0.0, std::nullopt}), ParameterError);
  CHECK_THROWS_AS(Grid(100.0, 100), ParameterError);
  CHECK(Stepper(constant_medium(4.0, 100.0), grid, {0.05, std::nullopt}).stop_margin() ==
        doctest::Approx(10.0));
}

TEST_CASE("initial datum") {
  const Grid grid(100.0, 1000);
  const auto u = InitialDatum{}.sample(grid);
  CHECK(u[0] == 1.0);
  CHECK(u[19] == 1.0);
  CHECK(u[20] == doctest::Approx(0.5));
  CHECK(u[21] == 0.0);
  InitialDatum wide;
  wide.profile = [](double x) { return x < 50.0 ? 1.0 : 0.0; };
  CHECK_THROWS_AS(wide.sample(grid), ParameterError);
  InitialDatum tall;
  tall.profile = [](double x) { return x < 1.0 ? 1.5 : 0.0; };
  CHECK_THROWS_AS(tall.sample(grid), ParameterError);
}

TEST_CASE("mu = 4 spreads at speed 4") {
  const Grid grid(300.0, 3000);
  RunOptions opt;
  opt.t_end = 60.0;
  const auto res = run(constant_medium(4.0, 300.0), grid, {0.02, std::nullopt}, {}, opt);
  const auto est = fronttrack::estimate_spreading_speeds(res.trace, {0.5, 10.0, 0.75});
  CHECK(est.w_low == doctest::Approx(4.0).epsilon(0.03));
  CHECK(est.w_up == doctest::Approx(4.0).epsilon(0.03));
  for (double v : res.field.u) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
  }
}

TEST_CASE("early stop near the boundary") {
  const Grid grid(120.0, 1200);
  RunOptions opt;
  opt.t_end = 100.0;
  const auto res = run(constant_medium(1.0, 120.0), grid, {0.02, std::nullopt}, {}, opt);
  CHECK(res.early_stop);
  CHECK(res.trace.x.back() >= 120.0 - 20.0);
  CHECK(res.field.t < 100.0);
}

TEST_CASE("observers see snapshots at their interval") {
  const Grid grid(100.0, 1000);
  RunOptions opt;
  opt.t_end = 5.0;
  opt.observe_interval = 1.0;
  std::vector<double> seen;
  opt.observers.push_back([&](const Field& f) { seen.push_back(f.t); });
  run(constant_medium(1.0, 100.0), grid, {0.02, std::nullopt}, {}, opt);
  REQUIRE(seen.size() == 6);
  for (std::size_t i = 0; i < seen.size(); ++i) {
    CHECK(seen[i] == doctest::Approx(static_cast<double>(i)));
  }

  Field f{grid, InitialDatum{}.sample(grid), 0.0};
  std::ostringstream csv;
  write_snapshot_csv(csv, f);
  CHECK(csv.str().rfind("t,0\nx,u\n", 0) == 0);
}

TEST_CASE("compact subsolution") {
  const double rmin = theory::min_radius_subsolution(1.0, 1.8);
  const auto ok = verify_subsolution(1.0, 1.8, 5.0, 1e-3);
  CHECK(ok.passed);
  CHECK(ok.extreme <= 1e-10);
  REQUIRE(ok.kappa_star.has_value());
  CHECK(*ok.kappa_star > 1e-3);
  const auto big = verify_subsolution(1.0, 1.8, 5.0, 1.0);
  CHECK(!big.passed);
  CHECK(big.extreme > 0.0);
  CHECK_THROWS_AS(verify_subsolution(1.0, 1.8, 3.6034, 1e-3), ParameterError);
  CHECK_THROWS_AS(verify_subsolution(1.0, 1.8, rmin, 1e-3), ParameterError);
  CHECK_NOTHROW(verify_subsolution(1.0, 1.8, rmin * (1.0 + 1e-9), 1e-3));
  CHECK_THROWS_AS(verify_subsolution(1.0, 2.0, 50.0, 1e-3), ParameterError);
}

TEST_CASE("exponential supersolution residual equals mu_plus v") {
  const Grid grid(20.0, 2000);
  for (double kappa : {1.0, 0.3, 5.0}) {
    const auto r = verify_supersolution_exp(4.0, kappa, grid);
    CHECK(r.passed);
    CHECK(r.extreme >= -1e-12);
    REQUIRE(r.slope.has_value());
    CHECK(std::abs(*r.slope - 4.0) <= 1e-8);
  }
}

TEST_CASE("ubar supersolution") {
  const auto cs = PeriodicProfile::cosine(2.0, 1.0);
  const auto lim = theory::w_infinity(cs);
  const Grid grid(3000.0, 30000);
  const auto r = verify_supersolution_ubar(cs, PhaseMap::power(0.5), lim.k_star,
                                           1.1 * lim.speed, 10.0, grid);
  CHECK(r.passed);
  CHECK(r.extreme >= -1e-8);
  CHECK(r.points > 100);
  REQUIRE(r.covered_from.has_value());

  const auto flat = verify_supersolution_ubar(PeriodicProfile::constant(1.0), PhaseMap::power(0.5),
                                              2.0, 2.2, 10.0, grid);
  CHECK(flat.passed);
  CHECK(flat.extreme >= 0.0);
  CHECK_THROWS_AS(verify_supersolution_ubar(cs, PhaseMap::power(0.5), lim.k_star,
                                            0.9 * lim.speed, 10.0, grid),
                  ParameterError);
}
