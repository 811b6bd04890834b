#include <cmath>
#include <random>

#include "doctest.h"
#include "kpp/errors.hpp"
#include "kpp/theory.hpp"

using namespace kpp;
using namespace kpp::theory;
using kpp::media::PeriodicProfile;

namespace {

// j for high on a fraction theta, low elsewhere.
double j_two_value(double high, double low, double theta, double k) {
  return theta * std::sqrt(k - high) + (1.0 - theta) * std::sqrt(k - low);
}

// j for mean + amp cos(2 pi y): with a = k - mean + amp, the average of
// sqrt(a - 2 amp cos^2) is sqrt(a) (2/pi) E(sqrt(2 amp / a)).
double j_cosine(double mean, double amp, double k) {
  const double a = k - mean + amp;
  return std::sqrt(a) * (2.0 / M_PI) * std::comp_ellint_2(std::sqrt(2.0 * amp / a));
}

template <class J>
double brute_force_min(J j, double lo, double hi) {
  const int n = 1000000;
  double best = INFINITY;
  for (int i = 1; i <= n; ++i) {
    const double k = lo + (hi - lo) * i / n;
    best = std::min(best, k / j(k));
  }
  return best;
}

const PeriodicProfile kTwoValue = PeriodicProfile::two_value(4.0, 1.0, 0.5);
const PeriodicProfile kCosine = PeriodicProfile::cosine(2.0, 1.0);

}  // namespace

TEST_CASE("j(k) spot values") {
  CHECK(j_of_k(PeriodicProfile::constant(1.0), 2.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(j_of_k(kTwoValue, 4.0) == doctest::Approx(0.5 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(j_of_k(kCosine, 3.0) > 0.0);
  CHECK_THROWS_AS(j_of_k(kCosine, 2.9), DomainError);
}

TEST_CASE("j(k) against closed forms") {
  for (double k : {4.0, 4.001, 4.5, 7.0, 30.0}) {
    CHECK(j_of_k(kTwoValue, k) == doctest::Approx(j_two_value(4.0, 1.0, 0.5, k)).epsilon(1e-11));
  }
  const auto skew = PeriodicProfile::two_value(3.0, 0.5, 0.2);
  for (double k : {3.0, 3.3, 10.0}) {
    CHECK(j_of_k(skew, k) == doctest::Approx(j_two_value(3.0, 0.5, 0.2, k)).epsilon(1e-11));
  }
  for (double k : {3.0, 3.0001, 3.2, 4.237578, 12.0}) {
    CHECK(j_of_k(kCosine, k) == doctest::Approx(j_cosine(2.0, 1.0, k)).epsilon(1e-10));
  }
  const auto shallow = PeriodicProfile::cosine(1.0, 0.3);
  for (double k : {1.3, 1.5, 4.0}) {
    CHECK(j_of_k(shallow, k) == doctest::Approx(j_cosine(1.0, 0.3, k)).epsilon(1e-10));
  }
}

TEST_CASE("j is strictly increasing") {
  std::mt19937 rng(5);
  for (const auto& prof : {kTwoValue, kCosine, PeriodicProfile::sampled({1.0, 2.0, 1.4, 2.6})}) {
    std::uniform_real_distribution<double> k(prof.max_value(), prof.max_value() + 20.0);
    for (int i = 0; i < 50; ++i) {
      double a = k(rng), b = k(rng);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-6) continue;
      CHECK(j_of_k(prof, a) < j_of_k(prof, b));
    }
  }
}

TEST_CASE("H(p) examples and inverse consistency") {
  CHECK(H_of_p(PeriodicProfile::constant(1.0), 0.5) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(H_of_p(kTwoValue, 0.5) == 4.0);
  CHECK(H_of_p(kTwoValue, -0.5) == 4.0);
  const double jm = j_of_k(kCosine, 3.0);
  CHECK(H_of_p(kCosine, jm) == doctest::Approx(3.0).epsilon(1e-12));
  for (const auto& prof : {kTwoValue, kCosine}) {
    const double jM = j_of_k(prof, prof.max_value());
    for (double p : {jM, 1.01 * jM, 2.0, -2.5, 7.0}) {
      if (std::abs(p) < jM) continue;
      CHECK(j_of_k(prof, H_of_p(prof, p)) == doctest::Approx(std::abs(p)).epsilon(1e-9));
    }
  }
}

TEST_CASE("w_infinity matches a brute-force grid") {
  const auto tv = w_infinity(kTwoValue);
  const double tv_grid = brute_force_min([](double k) { return j_two_value(4.0, 1.0, 0.5, k); },
                                         4.0, 200.0);
  CHECK(tv.speed == doctest::Approx(tv_grid).epsilon(1e-6));
  CHECK(tv.speed == doctest::Approx(3.283522480353).epsilon(1e-10));
  CHECK(tv.k_star == doctest::Approx(5.737035).epsilon(1e-5));

  const auto cs = w_infinity(kCosine);
  const double cs_grid =
      brute_force_min([](double k) { return j_cosine(2.0, 1.0, k); }, 3.0, 120.0);
  CHECK(cs.speed == doctest::Approx(cs_grid).epsilon(1e-6));
  CHECK(cs.speed == doctest::Approx(2.870559199015).epsilon(1e-10));
  CHECK(cs.speed > 2.0);
  CHECK(cs.speed < 2.0 * std::sqrt(3.0));
}

TEST_CASE("limiting speed of constant profiles") {
  for (double m : {0.25, 1.0, 4.0}) {
    const auto s = limiting_speed(PeriodicProfile::constant(m));
    CHECK(s.homogeneous);
    CHECK(std::abs(s.speed - 2.0 * std::sqrt(m)) <= 1e-10);
    CHECK(s.k_star == doctest::Approx(2.0 * m));
  }
  CHECK_THROWS_AS(w_infinity(PeriodicProfile::constant(1.0)), DegenerateError);
}

TEST_CASE("w_infinity lies between the homogeneous bounds") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> v(0.2, 5.0);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<double> values(3 + trial % 5);
    for (double& x : values) x = v(rng);
    const auto prof = PeriodicProfile::sampled(values);
    if (prof.is_constant()) continue;
    const double w = w_infinity(prof).speed;
    CHECK(w >= 2.0 * std::sqrt(prof.min_value()));
    CHECK(w <= 2.0 * std::sqrt(prof.max_value()));
  }
}

TEST_CASE("two-value bounds") {
  CHECK(std::abs(two_value_lower_bound_wstar(4.0, 1.0, 3.0) - 3.0) <= 1e-12);
  CHECK(std::abs(two_value_upper_bound_wlow(4.0, 1.0, 3.0) - 20.0 / 7.0) <= 1e-12);
  CHECK(two_value_lower_bound_wstar(4.0, 1.0, 1e6) == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(two_value_upper_bound_wlow(4.0, 1.0, 1e6) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(two_value_lower_bound_wstar(2.0, 2.0, 5.0) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(two_value_upper_bound_wlow(2.0, 2.0, 5.0) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(two_value_lower_bound_wstar(4.0, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(two_value_upper_bound_wlow(1.0, 4.0, 3.0), ParameterError);

  double prev_lo = 0.0, prev_up = INFINITY;
  for (double k = 1.001; k <= 1e6; k *= 1.5) {
    const double lo = two_value_lower_bound_wstar(4.0, 1.0, k);
    const double up = two_value_upper_bound_wlow(4.0, 1.0, k);
    CHECK(lo > prev_lo);
    CHECK(up < prev_up);
    CHECK(lo <= 4.0);
    CHECK(up >= 2.0);
    prev_lo = lo;
    prev_up = up;
  }
}

TEST_CASE("threshold bounds") {
  const auto b = threshold_bounds(kCosine, 1e3, 0.5);
  CHECK(b.delta == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(b.delta_prime == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(b.lower_on_wupper == doctest::Approx(2.0 * std::sqrt(2.5)).epsilon(0.01));
  CHECK(b.upper_on_wlower == doctest::Approx(2.0 * std::sqrt(1.5)).epsilon(0.01));
  CHECK(b.lower_on_wupper > b.upper_on_wlower);
  CHECK_THROWS_AS(threshold_bounds(kCosine, 10.0, 1.0), ParameterError);
  CHECK_THROWS_AS(threshold_bounds(kCosine, 0.0, 0.5), ParameterError);
}

TEST_CASE("minimal subsolution radius") {
  CHECK(min_radius_subsolution(1.0, 0.0) == doctest::Approx(M_PI / 2.0).epsilon(1e-14));
  CHECK(min_radius_subsolution(1.0, 1.8) == doctest::Approx(M_PI / (2.0 * std::sqrt(0.19))));
  CHECK(min_radius_subsolution(1.0, 1.8) == doctest::Approx(3.60365).epsilon(1e-5));
  CHECK(min_radius_subsolution(1.0, std::sqrt(4.0 - 4e-12)) > 1e6);
  CHECK_THROWS_AS(min_radius_subsolution(1.0, 2.0), ParameterError);
}

TEST_CASE("speed bounds JSON round trip") {
  auto b = homogeneous_bounds(1.0, 4.0);
  CHECK(b.lower_homog == 2.0);
  CHECK(b.upper_homog == 4.0);
  b.w_infinity = 3.1;
  b.k_star = 5.0;
  b.two_value_lower = 3.5;
  b.k_ratio_plus = 8.0;
  const auto j = to_json(b);
  CHECK(j.at("two_value_upper").is_null());
  const auto back = speed_bounds_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(*back.w_infinity == 3.1);
  CHECK(!back.threshold_lower.has_value());
}
