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

#ifndef THZ_PROPAGATION_HPP
#define THZ_PROPAGATION_HPP

namespace thz::propagation {

// Scalar link parameters. All powers are watts; dBm conversions happen at
// the CLI boundary only.
struct LinkCondition {
  double f_hz = 0;            // carrier frequency, > 0
  double d_m = 0;             // link distance, > 0
  double k_per_m = 0;         // medium absorption coefficient, >= 0
  double pt_w = 0;            // total transmit power, > 0
  double t0_k = 296.0;        // reference temperature for noise terms
  double noise_w = 1e-11;     // receiver noise power sigma^2 (-80 dBm)
};

// Throws std::invalid_argument if any field is out of range.
void validate(const LinkCondition& c);

// Free-space spreading loss (4 pi f d / c)^2, as a power ratio >= 1
// (for f d >= c / 4 pi).
double spreading_attenuation(double f_hz, double d_m);

// Molecular absorption loss e^(k d), as a power ratio >= 1.
double absorption_attenuation(double k_per_m, double d_m);

// LoS received power: pt / (spreading * absorption).
double los_received_power(const LinkCondition& c);

// Power re-radiated by the absorbing molecules and collected at the
// receiver: pt * (1 - e^(-k d)) / spreading. Complements the LoS power:
// los + reradiated = pt * (c / 4 pi f d)^2 for every k.
double reradiated_power(const LinkCondition& c);

// Sky noise PSD, W/Hz: kB * T0 * (1 - e^(-k d)) * (c / (sqrt(4 pi) f))^2.
// With infinite_path_limit set, returns the distance-independent limit
// kB * T0 * (c / (sqrt(4 pi) f))^2.
double sky_noise_psd(const LinkCondition& c, bool infinite_path_limit = false);

// Rician K-factor e^(-k d) / (1 - e^(-k d)): the LoS-to-scattered power
// ratio. Depends on k and d only through k*d; strictly decreasing in the
// product. k = 0 returns +infinity (pure LoS), not an error.
double k_factor(double k_per_m, double d_m);

// Combined spreading + absorption loss in dB. Computed in the log domain
// so large k*d does not overflow.
double total_attenuation_db(double f_hz, double d_m, double k_per_m);

}  // namespace thz::propagation

#endif
