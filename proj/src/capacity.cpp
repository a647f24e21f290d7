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

#include "thz/capacity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "thz/constants.hpp"
#include "thz/rng.hpp"

namespace thz::capacity {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Runs body(0) .. body(count-1) on up to `threads` workers. Each index owns
// its own output slot, so the aggregate is independent of scheduling.
template <typename Body>
void indexed_parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
      body(i);
  };
  std::vector<std::thread> pool;
  const unsigned helpers = std::min<unsigned>(threads, 64) - 1;
  pool.reserve(helpers);
  for (unsigned t = 0; t < helpers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

struct MeanStd {
  double mean = 0, stddev = 0;
};

MeanStd mean_and_sample_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  // a degenerate (deterministic) sample has exactly zero spread
  const bool constant =
      std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; });
  if (constant) {
    out.mean = xs[0];
    return out;
  }
  double sum = 0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

}  // namespace

const char* to_string(Technique t) {
  return t == Technique::kBeamforming ? "beamforming" : "multiplexing";
}

void validate(const CapacityConfig& cfg) {
  require(cfg.p_w > 0, "CapacityConfig: P must be > 0");
  require(cfg.sigma2_w > 0, "CapacityConfig: sigma^2 must be > 0");
  require(cfg.snr_threshold >= 0, "CapacityConfig: threshold must be >= 0");
}

arma::vec singular_values(const channel::ChannelMatrix& h) {
  require(h.entries.is_finite(), "singular_values: non-finite entries");
  arma::vec s;
  if (!arma::svd(s, h.entries))
    throw std::runtime_error("singular_values: SVD failed to converge");
  return s;
}

StreamCapacity capacity_multiplexing(const channel::ChannelMatrix& h,
                                     const CapacityConfig& cfg) {
  validate(cfg);
  const arma::vec s = singular_values(h);
  const double per_stream = cfg.p_w / (static_cast<double>(h.n_tx()) *
                                       cfg.sigma2_w);
  StreamCapacity out;
  for (double sv : s) {
    const double snr = per_stream * sv * sv;
    if (snr >= cfg.snr_threshold) {
      out.capacity_bps_hz += std::log2(1.0 + snr);
      out.active_streams += 1.0;
    }
  }
  return out;
}

double capacity_beamforming(const channel::ChannelMatrix& h,
                            const CapacityConfig& cfg) {
  validate(cfg);
  const arma::vec s = singular_values(h);
  const double snr = cfg.p_w * s(0) * s(0) / cfg.sigma2_w;
  return snr >= cfg.snr_threshold ? std::log2(1.0 + snr) : 0.0;
}

StreamCapacity evaluate_capacity(const channel::ChannelMatrix& h,
                                 const CapacityConfig& cfg) {
  if (cfg.technique == Technique::kMultiplexing)
    return capacity_multiplexing(h, cfg);
  validate(cfg);
  const arma::vec s = singular_values(h);
  const double snr = cfg.p_w * s(0) * s(0) / cfg.sigma2_w;
  StreamCapacity out;
  if (snr >= cfg.snr_threshold) {
    out.capacity_bps_hz = std::log2(1.0 + snr);
    out.active_streams = 1.0;
  }
  return out;
}

double capacity_formula_det(const arma::cx_mat& h, double p_w,
                            double sigma2_w) {
  require(h.is_finite(), "capacity_formula_det: non-finite entries");
  require(p_w > 0 && sigma2_w > 0, "capacity_formula_det: P, sigma^2 > 0");
  const double alpha = p_w / (static_cast<double>(h.n_cols) * sigma2_w);
  // det(I + a H H^dag) = det(I + a H^dag H); factor the smaller Gram matrix
  arma::cx_mat gram = h.n_rows <= h.n_cols ? arma::cx_mat(h * h.t())
                                           : arma::cx_mat(h.t() * h);
  gram *= alpha;
  gram.diag() += 1.0;
  return arma::log_det_sympd(gram) / std::numbers::ln2;
}

double capacity_formula_det(const channel::ChannelMatrix& h,
                            const CapacityConfig& cfg) {
  validate(cfg);
  return capacity_formula_det(h.entries, cfg.p_w, cfg.sigma2_w);
}

namespace {

unsigned worker_count(std::size_t trials, std::size_t nr, std::size_t nt) {
  // THZMIMO_THREADS overrides the sizing heuristic (0 = auto)
  if (const char* env = std::getenv("THZMIMO_THREADS")) {
    const long forced = std::strtol(env, nullptr, 10);
    if (forced > 0) return static_cast<unsigned>(forced);
  }
  const double work = static_cast<double>(trials) * static_cast<double>(nr) *
                      static_cast<double>(nt) *
                      static_cast<double>(std::min(nr, nt));
  if (work < 2e8) return 1;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

CapacityResult monte_carlo_capacity(const MonteCarloScenario& sc,
                                    std::size_t trials, std::uint64_t seed) {
  require(trials >= 1, "monte_carlo_capacity: trials must be >= 1");
  validate(sc.cfg);

  const channel::ChannelMatrix los =
      channel::los_channel(sc.tx, sc.rx, sc.f_hz, sc.k_per_m);

  CapacityResult result;
  result.technique = sc.cfg.technique;
  result.f_hz = sc.f_hz;
  result.d_m = los.distance_m;
  result.k_per_m = sc.k_per_m;

  if (!sc.cfg.include_reradiation) {
    // deterministic LoS channel: one trial carries the whole distribution
    const StreamCapacity cap = evaluate_capacity(los, sc.cfg);
    result.mean_capacity_bps_hz = cap.capacity_bps_hz;
    result.std_capacity_bps_hz = 0.0;
    result.trials = 1;
    result.active_streams_mean = cap.active_streams;
    return result;
  }

  std::vector<double> capacities(trials);
  std::vector<double> streams(trials);
  indexed_parallel_for(
      trials, worker_count(trials, los.n_rx(), los.n_tx()),
      [&](std::size_t t) {
        const std::uint64_t trial_seed = rng::derive_stream(seed, t);
        channel::ChannelMatrix total = channel::reradiation_channel(
            sc.tx, sc.rx, sc.f_hz, sc.k_per_m, trial_seed);
        total.entries += los.entries;
        total.provenance = channel::Provenance::kTotal;
        const StreamCapacity cap = evaluate_capacity(total, sc.cfg);
        capacities[t] = cap.capacity_bps_hz;
        streams[t] = cap.active_streams;
      });

  const MeanStd cap_stats = mean_and_sample_std(capacities);
  result.mean_capacity_bps_hz = cap_stats.mean;
  result.std_capacity_bps_hz = cap_stats.stddev;
  result.trials = trials;
  result.active_streams_mean = mean_and_sample_std(streams).mean;
  return result;
}

RicianBound rician_lower_bound(const MonteCarloScenario& sc,
                               std::size_t trials, std::uint64_t seed) {
  require(trials >= 1, "rician_lower_bound: trials must be >= 1");
  require(sc.k_per_m > 0, "rician_lower_bound: k must be > 0");
  validate(sc.cfg);

  const channel::ChannelMatrix los =
      channel::los_channel(sc.tx, sc.rx, sc.f_hz, sc.k_per_m);
  // normalize by the common free-space amplitude c / (4 pi f d)
  const double scale = 4.0 * std::numbers::pi * sc.f_hz * los.distance_m /
                       kSpeedOfLight;

  std::vector<double> full(trials);
  std::vector<double> nlos(trials);
  indexed_parallel_for(
      trials, worker_count(trials, los.n_rx(), los.n_tx()),
      [&](std::size_t t) {
        const std::uint64_t trial_seed = rng::derive_stream(seed, t);
        const channel::ChannelMatrix scatter = channel::reradiation_channel(
            sc.tx, sc.rx, sc.f_hz, sc.k_per_m, trial_seed);
        const arma::cx_mat h_full = (los.entries + scatter.entries) * scale;
        const arma::cx_mat h_nlos = scatter.entries * scale;
        full[t] = capacity_formula_det(h_full, sc.cfg.p_w, sc.cfg.sigma2_w);
        nlos[t] = capacity_formula_det(h_nlos, sc.cfg.p_w, sc.cfg.sigma2_w);
      });

  const MeanStd f = mean_and_sample_std(full);
  const MeanStd n = mean_and_sample_std(nlos);
  const double root = std::sqrt(static_cast<double>(trials));
  return {f.mean, n.mean, f.stddev / root, n.stddev / root};
}

}  // namespace thz::capacity
