// SPDX-License-Identifier: Apache-2.0
//
// thzmimo - terahertz massive-MIMO channel capacity simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "thz/propagation.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "thz/constants.hpp"

namespace thz::propagation {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// 1 - e^(-k d) without cancellation for small k d.
double absorbed_fraction(double k_per_m, double d_m) {
  return -std::expm1(-k_per_m * d_m);
}

// Free-space power gain (c / (4 pi f d))^2.
double free_space_gain(double f_hz, double d_m) {
  const double a = kSpeedOfLight / (4.0 * kPi * f_hz * d_m);
  return a * a;
}

}  // namespace

void validate(const LinkCondition& c) {
  require(c.f_hz > 0, "LinkCondition: f must be > 0");
  require(c.d_m > 0, "LinkCondition: d must be > 0");
  require(c.k_per_m >= 0, "LinkCondition: k must be >= 0");
  require(c.pt_w > 0, "LinkCondition: pt must be > 0");
  require(c.noise_w > 0, "LinkCondition: noise power must be > 0");
  require(c.t0_k > 0, "LinkCondition: T0 must be > 0");
}

double spreading_attenuation(double f_hz, double d_m) {
  require(f_hz > 0 && d_m > 0, "spreading_attenuation: f, d must be > 0");
  const double a = 4.0 * kPi * f_hz * d_m / kSpeedOfLight;
  return a * a;
}

double absorption_attenuation(double k_per_m, double d_m) {
  require(k_per_m >= 0 && d_m > 0,
          "absorption_attenuation: k >= 0, d > 0 required");
  return std::exp(k_per_m * d_m);
}

double los_received_power(const LinkCondition& c) {
  validate(c);
  return c.pt_w * free_space_gain(c.f_hz, c.d_m) *
         std::exp(-c.k_per_m * c.d_m);
}

double reradiated_power(const LinkCondition& c) {
  validate(c);
  return c.pt_w * free_space_gain(c.f_hz, c.d_m) *
         absorbed_fraction(c.k_per_m, c.d_m);
}

double sky_noise_psd(const LinkCondition& c, bool infinite_path_limit) {
  validate(c);
  const double a = kSpeedOfLight / (std::sqrt(4.0 * kPi) * c.f_hz);
  const double fraction =
      infinite_path_limit ? 1.0 : absorbed_fraction(c.k_per_m, c.d_m);
  return kBoltzmann * c.t0_k * fraction * a * a;
}

double k_factor(double k_per_m, double d_m) {
  require(k_per_m >= 0 && d_m > 0, "k_factor: k >= 0, d > 0 required");
  if (k_per_m == 0.0) return std::numeric_limits<double>::infinity();
  const double kd = k_per_m * d_m;
  return std::exp(-kd) / absorbed_fraction(k_per_m, d_m);
}

double total_attenuation_db(double f_hz, double d_m, double k_per_m) {
  require(f_hz > 0 && d_m > 0 && k_per_m >= 0,
          "total_attenuation_db: f, d > 0, k >= 0 required");
  // log-domain form of 10 log10(spreading * absorption); immune to e^(k d)
  // overflow for large k d
  const double spread_db =
      20.0 * std::log10(4.0 * kPi * f_hz * d_m / kSpeedOfLight);
  const double absorb_db = 10.0 * k_per_m * d_m / std::numbers::ln10;
  return spread_db + absorb_db;
}

}  // namespace thz::propagation
