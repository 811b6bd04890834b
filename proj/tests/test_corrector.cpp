#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "kpp/corrector.hpp"
#include "kpp/errors.hpp"
#include "kpp/numerics.hpp"
#include "kpp/theory.hpp"

using namespace kpp;
using namespace kpp::corrector;
using kpp::media::PeriodicProfile;
using kpp::media::PhaseMap;

namespace {

const PeriodicProfile kTwoValue = PeriodicProfile::two_value(4.0, 1.0, 0.5);
const PeriodicProfile kCosine = PeriodicProfile::cosine(2.0, 1.0);

}  // namespace

TEST_CASE("two-value kink at p = 0") {
  const auto c = build_corrector(kTwoValue, 0.0);
  REQUIRE(c.kink().has_value());
  CHECK(std::abs(*c.kink() - 0.75) <= 1e-10);
  CHECK(hj_residual(c, 1000) <= 1e-10);
  const auto [left, right] = c.kink_derivatives();
  CHECK(left == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-12));
  CHECK(right == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(std::abs(c.period_defect()) <= 1e-9);
  CHECK(c.H() == 4.0);
}

TEST_CASE("kink derivatives follow the branch formulas") {
  for (const auto& prof : {kTwoValue, kCosine}) {
    const double jM = theory::j_of_k(prof, prof.max_value());
    for (double p : {-0.6 * jM, -0.1 * jM, 0.3 * jM, 0.9 * jM}) {
      const auto c = build_corrector(prof, p);
      REQUIRE(c.kink().has_value());
      const double root = std::sqrt(prof.max_value() - prof.value(*c.kink()));
      const auto [left, right] = c.kink_derivatives();
      CHECK(left == doctest::Approx(p - root).epsilon(1e-9));
      CHECK(right == doctest::Approx(p + root).epsilon(1e-9));
      // one-sided difference quotients agree with them
      const double X = *c.kink();
      const double e = 1e-7;
      CHECK((c.value(X) - c.value(X - e)) / e == doctest::Approx(left).epsilon(1e-5));
      CHECK((c.value(X + e) - c.value(X)) / e == doctest::Approx(right).epsilon(1e-5));
    }
  }
}

TEST_CASE("F is decreasing") {
  std::mt19937 rng(23);
  for (const auto& prof : {kTwoValue, kCosine}) {
    const theory::RootIntegral integral(prof, prof.max_value());
    const double jM = integral.total();
    std::uniform_real_distribution<double> y(0.0, 1.0);
    std::uniform_real_distribution<double> pp(-jM, jM);
    for (int i = 0; i < 200; ++i) {
      double a = y(rng), b = y(rng);
      if (a > b) std::swap(a, b);
      const double p = pp(rng);
      const double Fa = p + jM - 2.0 * integral(a);
      const double Fb = p + jM - 2.0 * integral(b);
      CHECK(Fa >= Fb);
    }
  }
}

TEST_CASE("random p: HJ residual and periodicity") {
  std::mt19937 rng(29);
  for (const auto& prof : {kTwoValue, kCosine, PeriodicProfile::sampled({1.0, 2.2, 3.0, 1.7})}) {
    const double jM = theory::j_of_k(prof, prof.max_value());
    std::uniform_real_distribution<double> pp(-3.0 * jM, 3.0 * jM);
    for (int i = 0; i < 20; ++i) {
      const double p = pp(rng);
      const auto c = build_corrector(prof, p);
      CHECK(hj_residual(c, 2000) <= 1e-8);
      CHECK(std::abs(c.period_defect()) <= 1e-9);
      CHECK(std::abs(c.value(1.0) - c.value(0.0)) <= 1e-9);
      CHECK(c.kink().has_value() == (std::abs(p) < jM));
    }
  }
}

TEST_CASE("cosine corrector past j(M)") {
  const double jM = theory::j_of_k(kCosine, 3.0);
  const auto c = build_corrector(kCosine, jM + 1.0);
  CHECK(!c.kink().has_value());
  CHECK(hj_residual(c, 5000) <= 1e-8);
  // second derivative against a difference of v'
  for (double y : {0.1, 0.37, 0.8}) {
    const double e = 1e-5;
    const double fd = (c.derivative(y + e) - c.derivative(y - e)) / (2 * e);
    CHECK(c.second_derivative(y) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("reflection symmetry p -> -p") {
  const double jM = theory::j_of_k(kCosine, 3.0);
  for (double p : {0.4 * jM, jM + 0.7}) {
    const auto plus = build_corrector(kCosine, p);
    const auto minus = build_corrector(kCosine, -p);
    CHECK(hj_residual(minus, 1000) == doctest::Approx(hj_residual(plus, 1000)).epsilon(1e-6).scale(1e-8));
    for (double y : {0.05, 0.3, 0.61, 0.9}) {
      CHECK(minus.value(y) - minus.value(0.0) ==
            doctest::Approx(plus.value(-y) - plus.value(0.0)).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("near-constant profile has a near-zero corrector") {
  const auto flat = PeriodicProfile::cosine(1.0, 1e-8);
  const auto c = build_corrector(flat, 1.0);
  double sup = 0.0;
  for (double y : numerics::linspace(0.0, 1.0, 1001)) sup = std::max(sup, std::abs(c.value(y)));
  CHECK(sup <= 1e-4);
  const ApproxEigenfunction aef(c, PhaseMap::power(0.5));
  for (double x : {50.0, 500.0, 5000.0}) CHECK(std::abs(eigen_residual(aef, x)) <= 1e-6);
  CHECK_THROWS_AS(build_corrector(PeriodicProfile::constant(1.0), 1.0), DegenerateError);
}

TEST_CASE("six-term residual agrees with the direct form") {
  const double jM = theory::j_of_k(kCosine, 3.0);
  for (double p : {0.5 * jM, jM + 0.5}) {
    for (const auto& ph : {PhaseMap::power(0.5), PhaseMap::x_over_log(1.0),
                           PhaseMap::log_power(2.0, 1.0)}) {
      const ApproxEigenfunction aef(build_corrector(kCosine, p), ph);
      for (double x : {40.0, 333.0, 4000.0}) {
        if (aef.near_singular(x)) continue;
        CHECK(eigen_residual(aef, x) ==
              doctest::Approx(eigen_residual_direct(aef, x)).epsilon(1e-6).scale(1.0));
        CHECK(std::isfinite(aef.log_value(x)));
      }
    }
  }
}

TEST_CASE("affine phase collapses to phi' v''") {
  const double jM = theory::j_of_k(kCosine, 3.0);
  const auto c = build_corrector(kCosine, jM + 0.5);
  for (double L : {5.0, 50.0}) {
    const ApproxEigenfunction aef(c, PhaseMap::affine(L));
    for (double x : {1.3, 7.9, 22.2}) {
      CHECK(eigen_residual(aef, x) ==
            doctest::Approx(c.second_derivative(x / L) / L).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("residual decays along the power phase") {
  const auto p = theory::j_of_k(kCosine, theory::w_infinity(kCosine).k_star);
  const ApproxEigenfunction aef(build_corrector(kCosine, p), PhaseMap::power(0.5));
  const std::vector<double> probes{1e2, 1e4};
  const auto r = eigen_residual_profile(aef, probes);
  REQUIRE(!r[0].skipped);
  REQUIRE(!r[1].skipped);
  CHECK(std::abs(r[1].r) < std::abs(r[0].r));
  CHECK(local_residual_sup(aef, 1e4) < local_residual_sup(aef, 1e2));
}

TEST_CASE("kink preimages are skipped") {
  const auto c = build_corrector(kCosine, 0.2);
  const auto phase = PhaseMap::power(0.5);
  const ApproxEigenfunction aef(c, phase);
  const double x = phase.inverse(30.0 + *c.kink(), 1e4);
  const std::vector<double> probes{x, 2.0 * x};
  const auto r = eigen_residual_profile(aef, probes);
  CHECK(r[0].skipped);
  CHECK(std::isnan(r[0].r));
}

TEST_CASE("log growth check") {
  const auto p = theory::j_of_k(kCosine, 3.0) + 0.5;
  const ApproxEigenfunction aef(build_corrector(kCosine, p), PhaseMap::power(0.5));
  // phase 10.3 and 100.3: same point of the period, x phi' = sqrt(x) / 2
  const std::vector<double> probes{10.3 * 10.3, 100.3 * 100.3};
  const auto g = log_growth_check(aef, probes);
  CHECK(g.decaying);
  const double ratio = std::abs(g.samples[0].second / g.samples[1].second);
  CHECK(ratio == doctest::Approx(100.3 / 10.3).epsilon(1e-9));

  const ApproxEigenfunction affine(build_corrector(kCosine, p), PhaseMap::affine(3.0));
  const auto probes2 = numerics::logspace(10.0, 1e5, 9);
  double vmax = 0.0;
  for (double y : numerics::linspace(0.0, 1.0, 2001)) {
    vmax = std::max(vmax, std::abs(affine.corrector().value(y)));
  }
  for (const auto& [x, v] : log_growth_check(affine, probes2).samples) {
    CHECK(std::abs(v) <= vmax * 3.0 / x + 1e-12);
  }

  std::ostringstream csv;
  write_residual_csv(csv, aef, probes);
  CHECK(csv.str().rfind("x,r,log_growth\n", 0) == 0);
}
