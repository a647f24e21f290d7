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

#ifndef THZ_SCENARIO_HPP
#define THZ_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "thz/capacity.hpp"
#include "thz/spectra.hpp"

namespace thz::cli {

struct TechniqueVariant {
  capacity::Technique technique = capacity::Technique::kMultiplexing;
  bool with_reradiation = true;
};

// One batch experiment: a frequency sweep over a gas mixture (or an
// explicit absorption-coefficient sweep at fixed frequency), one or more
// link distances, and the requested technique variants. Exactly one of
// {mixture, k_override, k_grid} supplies the absorption coefficient.
// An empty `variants` list produces attenuation-only rows.
struct Scenario {
  std::string name = "custom";
  std::string mixture;               // mixture file stem under the spectra dir
  std::optional<double> k_override;  // fixed k for every frequency
  std::vector<double> k_grid;        // swept k values; requires a single f
  std::vector<double> f_grid_hz;
  std::vector<double> d_grid_m;
  double pt_w = 1e-3;
  double sigma2_w = 1e-11;
  double snr_threshold = 1.0;
  std::size_t antennas = 225;  // elements per array, perfect square
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::vector<TechniqueVariant> variants = {
      {capacity::Technique::kBeamforming, false},
      {capacity::Technique::kBeamforming, true},
      {capacity::Technique::kMultiplexing, false},
      {capacity::Technique::kMultiplexing, true},
  };
};

// Throws ConfigError listing every problem found.
void validate(const Scenario& s);

// One output record per grid point and technique variant.
struct SweepRow {
  double f_hz = 0;
  double k_per_m = 0;
  double d_m = 0;
  double pt_w = 0;
  std::string technique;    // "beamforming" | "multiplexing" | "none"
  std::string reradiation;  // "with" | "without" | "none"
  double mean_capacity_bps_hz = 0;
  double std_bps_hz = 0;
  double active_streams = 0;
  double k_factor = 0;
  double total_attenuation_db = 0;
};

// Bundled experiment presets. Parameter sets mirror the standard bench
// configuration (225-element arrays, -80 dBm noise, 0/10 dBm transmit
// power, 0.1/1/10 m distances).
std::vector<std::string> list_presets();
Scenario preset(const std::string& name);

// Parses the flat key-value scenario config (grammar in the README) on top
// of `base`. All errors are collected and reported in one ConfigError.
Scenario parse_scenario(std::istream& in, Scenario base);
Scenario parse_scenario_file(const std::filesystem::path& path, Scenario base);

// Desk-scale reduction: 16 antennas, 50 trials, thinned f/k grids.
void apply_smoke_mode(Scenario& s);

// Runs the sweep. Spectra and mixture files are resolved under
// `spectra_dir` (mixture `m` -> m.mix, species `S` -> S.csv). Progress
// lines go to `progress` (may be null); rows come back sorted by
// (f, k, d, technique, reradiation).
std::vector<SweepRow> run_scenario(const Scenario& s,
                                   const std::filesystem::path& spectra_dir,
                                   std::ostream* progress = nullptr);

// Fixed-header CSV with 9-significant-digit floats and LF line endings.
// Infinities serialize as `inf`.
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void emit_csv_file(const std::vector<SweepRow>& rows,
                   const std::filesystem::path& dest);

// Loads a mixture file and its species spectra, resampling to a shared
// grid when needed, and returns the mixed medium spectrum.
spectra::AbsorptionSpectrum load_mixed_spectrum(
    const std::filesystem::path& mixture_file,
    const std::filesystem::path& spectra_dir);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace thz::cli

#endif
