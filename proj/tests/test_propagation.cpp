#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "thz/constants.hpp"
#include "thz/propagation.hpp"
#include "thz/rng.hpp"

using namespace thz::propagation;

namespace {

LinkCondition cond(double f, double d, double k, double pt = 1e-3) {
  LinkCondition c;
  c.f_hz = f;
  c.d_m = d;
  c.k_per_m = k;
  c.pt_w = pt;
  return c;
}

double free_space(double pt, double f, double d) {
  const double a = thz::kSpeedOfLight / (4.0 * std::numbers::pi * f * d);
  return pt * a * a;
}

double log_uniform(std::uint64_t key, std::uint64_t ctr, double lo, double hi) {
  return lo * std::pow(hi / lo, thz::rng::uniform01(key, ctr));
}

}  // namespace

TEST_CASE("spreading attenuation") {
  // argument of the square equals 1
  const double f_unit = thz::kSpeedOfLight / (4.0 * std::numbers::pi);
  CHECK(spreading_attenuation(f_unit, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  // extended-precision oracle values
  CHECK(spreading_attenuation(5e11, 1.0) ==
        doctest::Approx(439256635.60396456).epsilon(1e-12));
  CHECK(10.0 * std::log10(spreading_attenuation(5e11, 10.0)) ==
        doctest::Approx(106.42718330860375).epsilon(1e-12));
  CHECK_THROWS_AS(spreading_attenuation(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("absorption attenuation") {
  CHECK(absorption_attenuation(0.0, 5.0) == 1.0);
  CHECK(absorption_attenuation(std::log(10.0), 1.0) ==
        doctest::Approx(10.0).epsilon(1e-12));
  // e^26, extended-precision oracle
  CHECK(absorption_attenuation(2.6, 10.0) ==
        doctest::Approx(195729609428.83876).epsilon(1e-12));
}

TEST_CASE("LoS received power") {
  CHECK(los_received_power(cond(5e11, 1.0, 0.0)) ==
        doctest::Approx(free_space(1e-3, 5e11, 1.0)).epsilon(1e-12));
  // inverse-square in distance for k = 0
  CHECK(los_received_power(cond(3e11, 2.0, 0.0)) ==
        doctest::Approx(los_received_power(cond(3e11, 1.0, 0.0)) / 4.0)
            .epsilon(1e-12));
  // composed attenuation oracle
  CHECK(los_received_power(cond(5e11, 1.0, 0.01)) ==
        doctest::Approx(2.2539211784197171e-12).epsilon(1e-12));
  // strictly decreasing in d, k, f
  CHECK(los_received_power(cond(5e11, 1.0, 0.01)) >
        los_received_power(cond(5e11, 1.1, 0.01)));
  CHECK(los_received_power(cond(5e11, 1.0, 0.01)) >
        los_received_power(cond(5e11, 1.0, 0.02)));
  CHECK(los_received_power(cond(5e11, 1.0, 0.01)) >
        los_received_power(cond(6e11, 1.0, 0.01)));
}

TEST_CASE("re-radiated power limits") {
  CHECK(reradiated_power(cond(5e11, 1.0, 0.0)) == 0.0);
  // total absorption: all transmitted power arrives re-radiated
  CHECK(reradiated_power(cond(5e11, 1.0, 1e5)) ==
        doctest::Approx(free_space(1e-3, 5e11, 1.0)).epsilon(1e-12));
  // monotone increasing in k
  CHECK(reradiated_power(cond(5e11, 1.0, 0.2)) >
        reradiated_power(cond(5e11, 1.0, 0.1)));
}

TEST_CASE("energy bookkeeping: los + reradiated = free-space power") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const double f = log_uniform(1, 3 * i, 1e11, 1e13);
    const double d = log_uniform(1, 3 * i + 1, 0.01, 100.0);
    const double k = log_uniform(1, 3 * i + 2, 1e-6, 1e3);
    const auto c = cond(f, d, k);
    const double total = los_received_power(c) + reradiated_power(c);
    CHECK(total == doctest::Approx(free_space(c.pt_w, f, d)).epsilon(1e-12));
  }
}

TEST_CASE("sky noise PSD") {
  CHECK(sky_noise_psd(cond(1e12, 1.0, 0.0)) == 0.0);
  // d -> infinity limit variant is independent of d and k
  const double limit = sky_noise_psd(cond(1e12, 1.0, 0.1), true);
  CHECK(sky_noise_psd(cond(1e12, 77.0, 3.0), true) == limit);
  // direct constant-arithmetic oracle at T0 = 296 K, f = 1 THz
  CHECK(limit == doctest::Approx(2.9228500507184965e-29).epsilon(1e-12));
  // saturated finite-d value approaches the limit
  CHECK(sky_noise_psd(cond(1e12, 10.0, 100.0)) ==
        doctest::Approx(limit).epsilon(1e-12));
}

TEST_CASE("K-factor") {
  CHECK(k_factor(std::log(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k_factor(0.01, 1.0) == doctest::Approx(99.500833331944448).epsilon(1e-12));
  CHECK(std::isinf(k_factor(0.0, 1.0)));
  // decreasing in k at fixed d
  CHECK(k_factor(1e-5, 1.0) > k_factor(1e-3, 1.0));
  CHECK(k_factor(1e-3, 1.0) > k_factor(1e-1, 1.0));
}

TEST_CASE("K-factor depends on k and d only through their product") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const double k = log_uniform(9, 2 * i, 1e-5, 1e2);
    const double d = log_uniform(9, 2 * i + 1, 0.01, 10.0);
    // power-of-two rescaling keeps the product bit-identical
    CHECK(k_factor(k, d) == k_factor(2.0 * k, d / 2.0));
    CHECK(k_factor(k, d) == k_factor(k / 4.0, 4.0 * d));
  }
}

TEST_CASE("K-factor equals the LoS/re-radiated power ratio") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const double f = log_uniform(13, 3 * i, 1e11, 1e13);
    const double d = log_uniform(13, 3 * i + 1, 0.01, 100.0);
    const double k = log_uniform(13, 3 * i + 2, 1e-6, 1e2);
    const auto c = cond(f, d, k);
    const double ratio = los_received_power(c) / reradiated_power(c);
    CHECK(k_factor(k, d) == doctest::Approx(ratio).epsilon(1e-12));
  }
}

TEST_CASE("total attenuation in dB") {
  // k = 0 reduces to the spreading term
  CHECK(total_attenuation_db(5e11, 10.0, 0.0) ==
        doctest::Approx(10.0 * std::log10(spreading_attenuation(5e11, 10.0)))
            .epsilon(1e-12));
  // no overflow at extreme absorption
  CHECK(std::isfinite(total_attenuation_db(5e11, 10.0, 1e3)));
  // strictly increasing in f, d and k
  for (std::uint64_t i = 0; i < 100; ++i) {
    const double f = log_uniform(17, 3 * i, 1e11, 1e13);
    const double d = log_uniform(17, 3 * i + 1, 0.01, 100.0);
    const double k = log_uniform(17, 3 * i + 2, 1e-6, 1e3);
    const double base = total_attenuation_db(f, d, k);
    CHECK(total_attenuation_db(f * 1.01, d, k) > base);
    CHECK(total_attenuation_db(f, d * 1.01, k) > base);
    CHECK(total_attenuation_db(f, d, k * 1.01) > base);
  }
}

TEST_CASE("LinkCondition validation") {
  CHECK_THROWS_AS(validate(cond(0.0, 1.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate(cond(1e12, 0.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate(cond(1e12, 1.0, -1.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate(cond(1e12, 1.0, 0.0, 0.0)), std::invalid_argument);
  auto c = cond(1e12, 1.0, 0.0);
  c.noise_w = 0.0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
}
