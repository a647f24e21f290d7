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

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "thz/errors.hpp"
#include "thz/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitDataError = 2;

std::filesystem::path default_spectra_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("THZMIMO_SPECTRA_DIR")) return env;
  return "data/spectra";
}

int run_command(const std::string& config, const std::string& preset_name,
                const std::string& out_path, const std::string& spectra_dir,
                bool smoke, bool full_scale,
                const std::optional<std::uint64_t>& seed,
                const std::optional<std::size_t>& antennas,
                const std::optional<std::size_t>& trials) {
  thz::cli::Scenario scenario;
  if (!preset_name.empty()) scenario = thz::cli::preset(preset_name);
  if (!config.empty())
    scenario = thz::cli::parse_scenario_file(config, std::move(scenario));
  if (config.empty() && preset_name.empty())
    throw thz::ConfigError("run: provide --config and/or --preset");

  if (smoke) thz::cli::apply_smoke_mode(scenario);
  if (!smoke && !full_scale) {
    // desk-scale default; Monte Carlo at 225x1000 is opt-in
    scenario.antennas = 16;
    scenario.trials = 50;
  }
  if (seed) scenario.seed = *seed;
  if (antennas) scenario.antennas = *antennas;
  if (trials) scenario.trials = *trials;

  const auto rows = thz::cli::run_scenario(
      scenario, default_spectra_dir(spectra_dir), &std::cerr);
  if (out_path.empty() || out_path == "-") {
    thz::cli::emit_csv(rows, std::cout);
  } else {
    thz::cli::emit_csv_file(rows, out_path);
    std::cerr << rows.size() << " rows -> " << out_path << "\n";
  }
  return kExitOk;
}

int mix_command(const std::string& mixture, const std::string& spectra_dir,
                const std::string& out_path) {
  const auto spectrum = thz::cli::load_mixed_spectrum(
      mixture, default_spectra_dir(spectra_dir));
  if (out_path.empty() || out_path == "-") {
    thz::spectra::serialize_spectrum(spectrum, std::cout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw thz::DataError("cannot write " + out_path);
    thz::spectra::serialize_spectrum(spectrum, out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  // the simulator parallelizes across Monte Carlo trials; keep BLAS
  // single-threaded to avoid oversubscription
  setenv("OPENBLAS_NUM_THREADS", "1", /*overwrite=*/0);

  CLI::App app{"terahertz massive-MIMO channel capacity simulator"};
  app.require_subcommand(1);

  std::string config, preset_name, out_path, spectra_dir, mixture;
  bool smoke = false, full_scale = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> antennas, trials;

  auto* run = app.add_subcommand("run", "run a sweep scenario");
  run->add_option("--config", config, "scenario config file");
  run->add_option("--preset", preset_name, "preset name (see list-presets)");
  run->add_option("--out", out_path, "output CSV path (default: stdout)");
  run->add_option("--seed", seed, "master RNG seed");
  run->add_option("--antennas", antennas, "elements per array (perfect square)");
  run->add_option("--trials", trials, "Monte Carlo trials per grid point");
  run->add_option("--spectra-dir", spectra_dir,
                  "spectra directory (default: $THZMIMO_SPECTRA_DIR or "
                  "data/spectra)");
  run->add_flag("--smoke", smoke, "thin grids and use 16 antennas, 50 trials");
  run->add_flag("--full-scale", full_scale,
                "keep the scenario's full antenna/trial counts");

  auto* list = app.add_subcommand("list-presets", "list preset names");

  auto* mix = app.add_subcommand("mix", "mix species spectra for a gas mixture");
  mix->add_option("--mixture", mixture, "mixture file")->required();
  mix->add_option("--spectra-dir", spectra_dir, "species spectra directory");
  mix->add_option("--out", out_path, "output CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
    if (list->parsed()) {
      for (const auto& name : thz::cli::list_presets())
        std::cout << name << "\n";
      return kExitOk;
    }
    if (mix->parsed()) return mix_command(mixture, spectra_dir, out_path);
    return run_command(config, preset_name, out_path, spectra_dir, smoke,
                       full_scale, seed, antennas, trials);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  } catch (const thz::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const thz::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}
