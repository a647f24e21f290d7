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

#ifndef THZ_SPECTRA_HPP
#define THZ_SPECTRA_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace thz::spectra {

// Sampled absorption-coefficient curve k(f) for one gas species or a
// mixture. Frequencies are strictly ascending (at least 2 samples, all
// positive); coefficients are finite, non-negative and in 1/m.
// Temperature and pressure describe the conditions the curve was computed
// for; they are carried as metadata only and never rescale the data.
// Instances are immutable after construction by convention; all operations
// in this module are pure.
struct AbsorptionSpectrum {
  std::string label;
  std::vector<double> frequencies_hz;
  std::vector<double> coefficients;  // k in 1/m, same length as frequencies
  double temperature_k = 273.0;
  double pressure_atm = 1.0;

  std::size_t size() const { return frequencies_hz.size(); }
  double min_frequency_hz() const { return frequencies_hz.front(); }
  double max_frequency_hz() const { return frequencies_hz.back(); }
};

// Throws DataError if any AbsorptionSpectrum invariant is violated.
void validate(const AbsorptionSpectrum& s);

// Named gas mixture: (species label, molar fraction) pairs. Fractions lie
// in [0, 1], labels are unique, and the fractions sum to 1 within ±0.01
// (mixture files store percentages that may not add up exactly).
struct GasMixture {
  std::string name;
  std::vector<std::pair<std::string, double>> components;
};

void validate(const GasMixture& m);

// Parses the spectrum CSV format: a `frequency_hz,k_per_m` header line
// followed by one sample per line (decimal or scientific notation, LF or
// CRLF). Lines starting with '#' are skipped. Rows are sorted by frequency
// after reading; duplicate frequencies are rejected. Every error message
// carries the offending 1-based line number.
AbsorptionSpectrum parse_spectrum(std::istream& in, const std::string& label,
                                  double temperature_k = 273.0,
                                  double pressure_atm = 1.0);

AbsorptionSpectrum parse_spectrum_file(const std::filesystem::path& path,
                                       const std::string& label);

// Writes the same CSV format. Values use shortest round-trip decimals, so
// parse -> serialize -> parse is bit-identical.
void serialize_spectrum(const AbsorptionSpectrum& s, std::ostream& out);

// Mixture file format: one `name=<text>` line plus one
// `<species>=<ratio_percent>` line per component. Ratios are divided by
// 100 on ingest.
GasMixture parse_mixture(std::istream& in);
GasMixture parse_mixture_file(const std::filesystem::path& path);

// k at frequency f by linear interpolation between the bracketing samples;
// exact at grid nodes. Throws DataError outside [min, max] frequency — no
// extrapolation.
double sample_k(const AbsorptionSpectrum& s, double f_hz);

// Resamples a spectrum onto `grid_hz` (ascending, inside the source range)
// via sample_k.
AbsorptionSpectrum resample_to_grid(const AbsorptionSpectrum& s,
                                    std::span<const double> grid_hz);

// Medium absorption coefficient of a mixture: the ratio-weighted pointwise
// sum of the component spectra. All referenced species must be present and
// share an identical frequency grid (resample_to_grid first otherwise).
AbsorptionSpectrum mix_spectra(
    const GasMixture& mixture,
    const std::map<std::string, AbsorptionSpectrum>& species);

}  // namespace thz::spectra

#endif
