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

#ifndef THZ_CAPACITY_HPP
#define THZ_CAPACITY_HPP

#include <armadillo>
#include <cstdint>

#include "thz/channel.hpp"

namespace thz::capacity {

enum class Technique { kBeamforming, kMultiplexing };
const char* to_string(Technique t);

struct CapacityConfig {
  double p_w = 1e-3;           // total transmit power
  double sigma2_w = 1e-11;     // per-antenna noise power (-80 dBm)
  double snr_threshold = 1.0;  // per-stream detectability threshold (0 dB)
  Technique technique = Technique::kMultiplexing;
  bool include_reradiation = true;
};

void validate(const CapacityConfig& cfg);

// Full singular spectrum of the channel matrix, descending. Throws
// std::invalid_argument on non-finite entries.
arma::vec singular_values(const channel::ChannelMatrix& h);

struct StreamCapacity {
  double capacity_bps_hz = 0;
  double active_streams = 0;  // streams at or above the SNR threshold
};

// Eigenchannel capacity with blind uniform power allocation over n_t
// streams: per-stream SNR_i = P sigma_i^2 / (n_t sigma^2). Streams below
// the threshold contribute nothing but still consume their power share.
StreamCapacity capacity_multiplexing(const channel::ChannelMatrix& h,
                                     const CapacityConfig& cfg);

// Single stream on the dominant eigenchannel with all power allocated to
// it: log2(1 + P sigma_1^2 / sigma^2). The threshold applies to this
// stream too (below it, capacity is 0).
double capacity_beamforming(const channel::ChannelMatrix& h,
                            const CapacityConfig& cfg);

// Dispatches on cfg.technique, also reporting the admitted stream count.
StreamCapacity evaluate_capacity(const channel::ChannelMatrix& h,
                                 const CapacityConfig& cfg);

// Threshold-free determinant form log2 det(I + P/(n_t sigma^2) H H^dag),
// computed by Cholesky factorization of the Gram matrix. Cross-check for
// capacity_multiplexing at threshold 0.
double capacity_formula_det(const channel::ChannelMatrix& h,
                            const CapacityConfig& cfg);
double capacity_formula_det(const arma::cx_mat& h, double p_w, double sigma2_w);

struct MonteCarloScenario {
  channel::ArrayGeometry tx, rx;
  double f_hz = 0;
  double k_per_m = 0;
  CapacityConfig cfg;
};

struct CapacityResult {
  double mean_capacity_bps_hz = 0;
  double std_capacity_bps_hz = 0;  // sample standard deviation over trials
  std::size_t trials = 0;
  double active_streams_mean = 0;
  Technique technique = Technique::kMultiplexing;
  double f_hz = 0;
  double d_m = 0;
  double k_per_m = 0;
};

// Evaluates `trials` total-channel realizations with per-trial seeds
// derived from `seed` (trial t uses rng::derive_stream(seed, t)). Trials
// run independently — possibly in parallel — and are aggregated in trial
// order, so results are bit-identical for a given seed regardless of
// scheduling. With cfg.include_reradiation = false the channel is
// deterministic and the evaluation collapses to a single trial.
CapacityResult monte_carlo_capacity(const MonteCarloScenario& sc,
                                    std::size_t trials, std::uint64_t seed);

// Monte Carlo estimates of both sides of the Rician capacity lower bound
// on the normalized channel: mean_full is E[C(H)], mean_nlos_only is
// E[C(sqrt(1 - e^(-k d)) H_a)], both via capacity_formula_det. Requires
// k > 0.
struct RicianBound {
  double mean_full = 0;
  double mean_nlos_only = 0;
  double se_full = 0;       // standard error of mean_full
  double se_nlos_only = 0;  // standard error of mean_nlos_only
};
RicianBound rician_lower_bound(const MonteCarloScenario& sc,
                               std::size_t trials, std::uint64_t seed);

}  // namespace thz::capacity

#endif
