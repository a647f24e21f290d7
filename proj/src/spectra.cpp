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

#include "thz/spectra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "thz/errors.hpp"

namespace thz::spectra {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

void append_shortest(std::string& buf, double v) {
  char tmp[32];
  auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof tmp, v);
  buf.append(tmp, ptr);
}

}  // namespace

void validate(const AbsorptionSpectrum& s) {
  if (s.frequencies_hz.size() < 2)
    throw DataError("spectrum '" + s.label + "': fewer than 2 samples");
  if (s.coefficients.size() != s.frequencies_hz.size())
    throw DataError("spectrum '" + s.label +
                    "': frequency/coefficient length mismatch");
  double prev = 0.0;
  for (std::size_t i = 0; i < s.frequencies_hz.size(); ++i) {
    const double f = s.frequencies_hz[i];
    const double k = s.coefficients[i];
    if (!(f > 0.0) || !std::isfinite(f))
      throw DataError("spectrum '" + s.label + "': non-positive frequency");
    if (f <= prev)
      throw DataError("spectrum '" + s.label +
                      "': frequencies not strictly ascending");
    if (!std::isfinite(k) || k < 0.0)
      throw DataError("spectrum '" + s.label +
                      "': negative or non-finite coefficient");
    prev = f;
  }
}

void validate(const GasMixture& m) {
  if (m.components.empty())
    throw DataError("mixture '" + m.name + "': no components");
  std::set<std::string> seen;
  double sum = 0.0;
  for (const auto& [species, ratio] : m.components) {
    if (!seen.insert(species).second)
      throw DataError("mixture '" + m.name + "': duplicate species '" +
                      species + "'");
    if (!(ratio >= 0.0) || !(ratio <= 1.0))
      throw DataError("mixture '" + m.name + "': ratio for '" + species +
                      "' outside [0, 1]");
    sum += ratio;
  }
  if (sum < 0.99 || sum > 1.01)
    throw DataError("mixture '" + m.name + "': ratios sum to " +
                    std::to_string(sum) + ", expected ~1");
}

AbsorptionSpectrum parse_spectrum(std::istream& in, const std::string& label,
                                  double temperature_k, double pressure_atm) {
  AbsorptionSpectrum out;
  out.label = label;
  out.temperature_k = temperature_k;
  out.pressure_atm = pressure_atm;

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<std::pair<double, double>> samples;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    if (!header_seen) {
      if (sv != "frequency_hz,k_per_m")
        throw DataError("spectrum '" + label + "' line " +
                        std::to_string(line_no) +
                        ": expected header 'frequency_hz,k_per_m'");
      header_seen = true;
      continue;
    }
    const auto comma = sv.find(',');
    double f = 0.0, k = 0.0;
    if (comma == std::string_view::npos ||
        !parse_double(sv.substr(0, comma), f) ||
        !parse_double(sv.substr(comma + 1), k))
      throw DataError("spectrum '" + label + "' line " +
                      std::to_string(line_no) + ": malformed row '" +
                      std::string(sv) + "'");
    if (!std::isfinite(f) || f <= 0.0)
      throw DataError("spectrum '" + label + "' line " +
                      std::to_string(line_no) + ": non-positive frequency");
    if (!std::isfinite(k) || k < 0.0)
      throw DataError("spectrum '" + label + "' line " +
                      std::to_string(line_no) + ": negative coefficient");
    samples.emplace_back(f, k);
  }
  if (!header_seen)
    throw DataError("spectrum '" + label + "': empty input, missing header");
  if (samples.size() < 2)
    throw DataError("spectrum '" + label + "': fewer than 2 samples");

  std::sort(samples.begin(), samples.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].first == samples[i - 1].first)
      throw DataError("spectrum '" + label + "': duplicate frequency " +
                      std::to_string(samples[i].first));

  out.frequencies_hz.reserve(samples.size());
  out.coefficients.reserve(samples.size());
  for (const auto& [f, k] : samples) {
    out.frequencies_hz.push_back(f);
    out.coefficients.push_back(k);
  }
  validate(out);
  return out;
}

AbsorptionSpectrum parse_spectrum_file(const std::filesystem::path& path,
                                       const std::string& label) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open spectrum file " + path.string());
  return parse_spectrum(in, label);
}

void serialize_spectrum(const AbsorptionSpectrum& s, std::ostream& out) {
  std::string buf = "frequency_hz,k_per_m\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    append_shortest(buf, s.frequencies_hz[i]);
    buf.push_back(',');
    append_shortest(buf, s.coefficients[i]);
    buf.push_back('\n');
  }
  out << buf;
}

GasMixture parse_mixture(std::istream& in) {
  GasMixture m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw DataError("mixture line " + std::to_string(line_no) +
                      ": expected key=value, got '" + std::string(sv) + "'");
    const std::string key{trim(sv.substr(0, eq))};
    const std::string_view value = trim(sv.substr(eq + 1));
    if (key == "name") {
      m.name = std::string(value);
      continue;
    }
    double percent = 0.0;
    if (!parse_double(value, percent) || percent < 0.0 || percent > 100.0)
      throw DataError("mixture line " + std::to_string(line_no) +
                      ": bad ratio for '" + key + "'");
    m.components.emplace_back(key, percent / 100.0);
  }
  validate(m);
  return m;
}

GasMixture parse_mixture_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open mixture file " + path.string());
  return parse_mixture(in);
}

double sample_k(const AbsorptionSpectrum& s, double f_hz) {
  const auto& fs = s.frequencies_hz;
  if (f_hz < fs.front() || f_hz > fs.back()) {
    std::ostringstream msg;
    msg << "frequency " << f_hz << " Hz outside spectrum '" << s.label
        << "' range [" << fs.front() << ", " << fs.back() << "]";
    throw DataError(msg.str());
  }
  const auto it = std::lower_bound(fs.begin(), fs.end(), f_hz);
  const std::size_t hi = static_cast<std::size_t>(it - fs.begin());
  if (fs[hi] == f_hz) return s.coefficients[hi];
  const std::size_t lo = hi - 1;
  const double t = (f_hz - fs[lo]) / (fs[hi] - fs[lo]);
  return s.coefficients[lo] + t * (s.coefficients[hi] - s.coefficients[lo]);
}

AbsorptionSpectrum resample_to_grid(const AbsorptionSpectrum& s,
                                    std::span<const double> grid_hz) {
  AbsorptionSpectrum out;
  out.label = s.label;
  out.temperature_k = s.temperature_k;
  out.pressure_atm = s.pressure_atm;
  out.frequencies_hz.assign(grid_hz.begin(), grid_hz.end());
  out.coefficients.reserve(grid_hz.size());
  for (double f : grid_hz) out.coefficients.push_back(sample_k(s, f));
  validate(out);
  return out;
}

AbsorptionSpectrum mix_spectra(
    const GasMixture& mixture,
    const std::map<std::string, AbsorptionSpectrum>& species) {
  validate(mixture);
  const AbsorptionSpectrum* reference = nullptr;
  for (const auto& [label, ratio] : mixture.components) {
    const auto it = species.find(label);
    if (it == species.end())
      throw DataError("mixture '" + mixture.name + "': missing species '" +
                      label + "'");
    validate(it->second);
    if (reference == nullptr) {
      reference = &it->second;
    } else if (it->second.frequencies_hz != reference->frequencies_hz) {
      throw DataError("mixture '" + mixture.name + "': species '" + label +
                      "' is on a different frequency grid than '" +
                      reference->label + "' (resample_to_grid first)");
    }
  }

  AbsorptionSpectrum out;
  out.label = mixture.name;
  out.temperature_k = reference->temperature_k;
  out.pressure_atm = reference->pressure_atm;
  out.frequencies_hz = reference->frequencies_hz;
  out.coefficients.assign(out.frequencies_hz.size(), 0.0);
  for (const auto& [label, ratio] : mixture.components) {
    const auto& ks = species.at(label).coefficients;
    for (std::size_t i = 0; i < ks.size(); ++i)
      out.coefficients[i] += ratio * ks[i];
  }
  validate(out);
  return out;
}

}  // namespace thz::spectra
