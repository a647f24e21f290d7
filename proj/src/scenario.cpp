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

#include "thz/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "thz/channel.hpp"
#include "thz/errors.hpp"
#include "thz/propagation.hpp"
#include "thz/rng.hpp"

namespace thz::cli {

namespace {

constexpr double kGHz = 1e9;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_unsigned(std::string_view s, std::uint64_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(lo + (hi - lo) * static_cast<double>(i) /
                           static_cast<double>(count - 1));
  return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (double e : linspace(std::log10(lo), std::log10(hi), count))
    out.push_back(std::pow(10.0, e));
  return out;
}

// Grid syntax: `a,b,c` | `linspace:lo:hi:n` | `logspace:lo:hi:n` |
// `range:start:stop:step` (inclusive stop).
bool parse_grid(std::string_view text, std::vector<double>& out,
                std::string& err) {
  text = trim(text);
  const auto fail = [&](const std::string& m) {
    err = m;
    return false;
  };
  for (const char* name : {"linspace", "logspace", "range"}) {
    const std::string prefix = std::string(name) + ":";
    if (text.substr(0, prefix.size()) != prefix) continue;
    const auto parts = split(text.substr(prefix.size()), ':');
    if (parts.size() != 3) return fail("expected " + prefix + "lo:hi:n");
    double lo = 0, hi = 0, third = 0;
    if (!parse_double(parts[0], lo) || !parse_double(parts[1], hi) ||
        !parse_double(parts[2], third))
      return fail("non-numeric bound in '" + std::string(text) + "'");
    if (std::string_view(name) == "range") {
      if (third <= 0 || hi < lo) return fail("bad range bounds/step");
      out.clear();
      const auto steps = static_cast<std::size_t>(
          std::floor((hi - lo) / third + 1e-9));
      for (std::size_t i = 0; i <= steps; ++i)
        out.push_back(lo + static_cast<double>(i) * third);
      return true;
    }
    const auto count = static_cast<std::size_t>(third);
    if (count < 1 || static_cast<double>(count) != third)
      return fail("point count must be a positive integer");
    if (std::string_view(name) == "logspace" && (lo <= 0 || hi <= 0))
      return fail("logspace bounds must be positive");
    out = std::string_view(name) == "logspace" ? logspace(lo, hi, count)
                                               : linspace(lo, hi, count);
    return true;
  }
  out.clear();
  for (const auto part : split(text, ',')) {
    double v = 0;
    if (!parse_double(part, v))
      return fail("non-numeric grid value '" + std::string(part) + "'");
    out.push_back(v);
  }
  return true;
}

std::string format9(double v) {
  char tmp[40];
  std::snprintf(tmp, sizeof tmp, "%.9g", v);
  return tmp;
}

bool is_perfect_square(std::size_t n) {
  const auto r = static_cast<std::size_t>(std::llround(std::sqrt(
      static_cast<double>(n))));
  return r * r == n;
}

const std::vector<std::string> kPresetNames = {
    "fig1_ksweep",
    "fig3_tropic_d0.1m_1mw",
    "fig3_tropic_d0.1m_10mw",
    "fig3_tropic_d1m_1mw",
    "fig3_tropic_d1m_10mw",
    "fig3_tropic_d10m_1mw",
    "fig3_tropic_d10m_10mw",
    "attenuation_fig2b",
};

Scenario fig3_preset(const std::string& name, double d_m, double pt_w) {
  Scenario s;
  s.name = name;
  s.mixture = "tropic";
  s.f_grid_hz.clear();
  for (double f = 100.0; f <= 1000.0 + 1e-9; f += 2.0)
    s.f_grid_hz.push_back(f * kGHz);
  s.d_grid_m = {d_m};
  s.pt_w = pt_w;
  return s;
}

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

std::vector<std::string> list_presets() { return kPresetNames; }

Scenario preset(const std::string& name) {
  if (name == "fig1_ksweep") {
    Scenario s;
    s.name = name;
    s.f_grid_hz = {500.0 * kGHz};
    s.k_grid = logspace(1e-5, 1e3, 25);
    s.d_grid_m = {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
    s.pt_w = 1e-3;
    s.variants = {{capacity::Technique::kBeamforming, true},
                  {capacity::Technique::kMultiplexing, true}};
    return s;
  }
  if (name == "fig3_tropic_d0.1m_1mw") return fig3_preset(name, 0.1, 1e-3);
  if (name == "fig3_tropic_d0.1m_10mw") return fig3_preset(name, 0.1, 1e-2);
  if (name == "fig3_tropic_d1m_1mw") return fig3_preset(name, 1.0, 1e-3);
  if (name == "fig3_tropic_d1m_10mw") return fig3_preset(name, 1.0, 1e-2);
  if (name == "fig3_tropic_d10m_1mw") return fig3_preset(name, 10.0, 1e-3);
  if (name == "fig3_tropic_d10m_10mw") return fig3_preset(name, 10.0, 1e-2);
  if (name == "attenuation_fig2b") {
    Scenario s = fig3_preset(name, 1.0, 1e-3);
    s.d_grid_m = {0.1, 1.0, 10.0};
    s.variants.clear();  // attenuation-only rows
    return s;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

void validate(const Scenario& s) {
  std::vector<std::string> errors;
  if (s.f_grid_hz.empty()) errors.push_back("no frequency grid");
  for (double f : s.f_grid_hz)
    if (!(f > 0) || !std::isfinite(f)) {
      errors.push_back("non-positive frequency in grid");
      break;
    }
  if (s.d_grid_m.empty()) errors.push_back("no distance grid");
  for (double d : s.d_grid_m)
    if (!(d > 0) || !std::isfinite(d)) {
      errors.push_back("non-positive distance in grid");
      break;
    }
  for (double k : s.k_grid)
    if (!(k >= 0) || !std::isfinite(k)) {
      errors.push_back("negative k in k_grid");
      break;
    }
  if (!s.k_grid.empty() && s.f_grid_hz.size() > 1)
    errors.push_back("k_grid sweeps require a single frequency");
  if (!s.k_grid.empty() && !s.mixture.empty())
    errors.push_back("k_grid and mixture are mutually exclusive");
  if (s.k_override && !s.mixture.empty())
    errors.push_back("k_override and mixture are mutually exclusive");
  if (s.k_override && !s.k_grid.empty())
    errors.push_back("k_override and k_grid are mutually exclusive");
  if (s.mixture.empty() && !s.k_override && s.k_grid.empty())
    errors.push_back("one of mixture, k_override or k_grid is required");
  if (s.k_override && !(*s.k_override >= 0))
    errors.push_back("k_override must be >= 0");
  if (!(s.pt_w > 0)) errors.push_back("transmit power must be > 0");
  if (!(s.sigma2_w > 0)) errors.push_back("noise power must be > 0");
  if (!(s.snr_threshold >= 0)) errors.push_back("snr threshold must be >= 0");
  if (s.antennas < 1 || !is_perfect_square(s.antennas))
    errors.push_back("antennas must be a perfect square >= 1");
  if (s.trials < 1) errors.push_back("trials must be >= 1");
  if (!errors.empty()) {
    std::string msg = "invalid scenario '" + s.name + "':";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
}

Scenario parse_scenario(std::istream& in, Scenario base) {
  std::vector<std::string> errors;
  std::string line;
  std::size_t line_no = 0;

  const auto bad = [&](const std::string& what) {
    errors.push_back("line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) {
      bad("expected key = value");
      continue;
    }
    const std::string key{trim(sv.substr(0, eq))};
    const std::string value{trim(sv.substr(eq + 1))};
    std::string grid_err;
    double num = 0;
    std::uint64_t unum = 0;

    if (key == "name") {
      base.name = value;
    } else if (key == "mixture") {
      base.mixture = value;
    } else if (key == "k_override") {
      if (parse_double(value, num))
        base.k_override = num;
      else
        bad("bad k_override value '" + value + "'");
    } else if (key == "k_grid") {
      if (!parse_grid(value, base.k_grid, grid_err)) bad("k_grid: " + grid_err);
    } else if (key == "f_ghz") {
      if (parse_grid(value, base.f_grid_hz, grid_err)) {
        for (double& f : base.f_grid_hz) f *= kGHz;
      } else {
        bad("f_ghz: " + grid_err);
      }
    } else if (key == "d_m") {
      if (!parse_grid(value, base.d_grid_m, grid_err)) bad("d_m: " + grid_err);
    } else if (key == "pt_w") {
      if (parse_double(value, num))
        base.pt_w = num;
      else
        bad("bad pt_w value");
    } else if (key == "pt_dbm") {
      if (parse_double(value, num))
        base.pt_w = dbm_to_watts(num);
      else
        bad("bad pt_dbm value");
    } else if (key == "noise_w") {
      if (parse_double(value, num))
        base.sigma2_w = num;
      else
        bad("bad noise_w value");
    } else if (key == "noise_dbm") {
      if (parse_double(value, num))
        base.sigma2_w = dbm_to_watts(num);
      else
        bad("bad noise_dbm value");
    } else if (key == "snr_threshold_db") {
      if (parse_double(value, num))
        base.snr_threshold = std::pow(10.0, num / 10.0);
      else
        bad("bad snr_threshold_db value");
    } else if (key == "antennas") {
      if (parse_unsigned(value, unum) && unum >= 1)
        base.antennas = static_cast<std::size_t>(unum);
      else
        bad("bad antennas value");
    } else if (key == "trials") {
      if (parse_unsigned(value, unum) && unum >= 1)
        base.trials = static_cast<std::size_t>(unum);
      else
        bad("bad trials value");
    } else if (key == "seed") {
      if (parse_unsigned(value, unum))
        base.seed = unum;
      else
        bad("bad seed value");
    } else if (key == "techniques") {
      std::vector<capacity::Technique> techniques;
      bool ok = true;
      if (value != "none") {
        for (const auto part : split(value, ',')) {
          if (part == "beamforming")
            techniques.push_back(capacity::Technique::kBeamforming);
          else if (part == "multiplexing")
            techniques.push_back(capacity::Technique::kMultiplexing);
          else {
            bad("unknown technique '" + std::string(part) + "'");
            ok = false;
          }
        }
      }
      if (ok) {
        std::vector<bool> rerad;
        for (const auto& v : base.variants)
          if (std::find(rerad.begin(), rerad.end(), v.with_reradiation) ==
              rerad.end())
            rerad.push_back(v.with_reradiation);
        if (rerad.empty()) rerad = {false, true};
        base.variants.clear();
        for (auto t : techniques)
          for (bool r : rerad) base.variants.push_back({t, r});
      }
    } else if (key == "reradiation") {
      std::vector<bool> rerad;
      if (value == "with")
        rerad = {true};
      else if (value == "without")
        rerad = {false};
      else if (value == "both")
        rerad = {false, true};
      else
        bad("reradiation must be with|without|both");
      if (!rerad.empty() && !base.variants.empty()) {
        std::vector<capacity::Technique> techniques;
        for (const auto& v : base.variants)
          if (std::find(techniques.begin(), techniques.end(), v.technique) ==
              techniques.end())
            techniques.push_back(v.technique);
        base.variants.clear();
        for (auto t : techniques)
          for (bool r : rerad) base.variants.push_back({t, r});
      }
    } else {
      bad("unknown key '" + key + "'");
    }
  }

  if (!errors.empty()) {
    std::string msg = "config errors:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return base;
}

Scenario parse_scenario_file(const std::filesystem::path& path,
                             Scenario base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_scenario(in, std::move(base));
}

void apply_smoke_mode(Scenario& s) {
  s.antennas = 16;
  s.trials = 50;
  const auto thin = [](std::vector<double>& grid, std::size_t stride) {
    if (grid.size() <= 2 || stride <= 1) return;
    std::vector<double> kept;
    for (std::size_t i = 0; i < grid.size(); i += stride)
      kept.push_back(grid[i]);
    if (kept.back() != grid.back()) kept.push_back(grid.back());
    grid = std::move(kept);
  };
  thin(s.f_grid_hz, 5);
  thin(s.k_grid, 3);
}

spectra::AbsorptionSpectrum load_mixed_spectrum(
    const std::filesystem::path& mixture_file,
    const std::filesystem::path& spectra_dir) {
  const spectra::GasMixture mixture = spectra::parse_mixture_file(mixture_file);
  std::map<std::string, spectra::AbsorptionSpectrum> species;
  for (const auto& [label, ratio] : mixture.components) {
    const auto path = spectra_dir / (label + ".csv");
    if (!std::filesystem::exists(path))
      throw DataError("missing spectrum for species '" + label +
                      "' (expected " + path.string() + ")");
    species.emplace(label, spectra::parse_spectrum_file(path, label));
  }

  // common grid: the first component's samples restricted to the range
  // covered by every species
  const auto& first = species.at(mixture.components.front().first);
  double lo = first.min_frequency_hz();
  double hi = first.max_frequency_hz();
  bool shared_grid = true;
  for (const auto& [label, sp] : species) {
    lo = std::max(lo, sp.min_frequency_hz());
    hi = std::min(hi, sp.max_frequency_hz());
    shared_grid =
        shared_grid && sp.frequencies_hz == first.frequencies_hz;
  }
  if (!shared_grid) {
    if (lo >= hi)
      throw DataError("mixture '" + mixture.name +
                      "': species spectra have no common frequency range");
    std::vector<double> grid;
    for (double f : first.frequencies_hz)
      if (f >= lo && f <= hi) grid.push_back(f);
    if (grid.size() < 2)
      throw DataError("mixture '" + mixture.name +
                      "': common frequency range has fewer than 2 samples");
    for (auto& [label, sp] : species) sp = spectra::resample_to_grid(sp, grid);
  }
  return spectra::mix_spectra(mixture, species);
}

std::vector<SweepRow> run_scenario(const Scenario& s,
                                   const std::filesystem::path& spectra_dir,
                                   std::ostream* progress) {
  validate(s);

  std::optional<spectra::AbsorptionSpectrum> medium;
  if (!s.mixture.empty())
    medium = load_mixed_spectrum(spectra_dir / (s.mixture + ".mix"),
                                 spectra_dir);

  // grid points in canonical order: (f or k) ascending, then d
  struct Point {
    double f_hz, k_per_m, d_m;
  };
  std::vector<Point> points;
  if (!s.k_grid.empty()) {
    std::vector<double> ks = s.k_grid;
    std::sort(ks.begin(), ks.end());
    for (double k : ks)
      for (double d : s.d_grid_m) points.push_back({s.f_grid_hz.front(), k, d});
  } else {
    std::vector<double> fs = s.f_grid_hz;
    std::sort(fs.begin(), fs.end());
    for (double f : fs) {
      const double k =
          s.k_override ? *s.k_override : spectra::sample_k(*medium, f);
      for (double d : s.d_grid_m) points.push_back({f, k, d});
    }
  }

  std::vector<SweepRow> rows;
  rows.reserve(points.size() * std::max<std::size_t>(s.variants.size(), 1));
  const std::size_t report_every = std::max<std::size_t>(points.size() / 20, 1);

  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const Point& pt = points[idx];
    SweepRow base;
    base.f_hz = pt.f_hz;
    base.k_per_m = pt.k_per_m;
    base.d_m = pt.d_m;
    base.pt_w = s.pt_w;
    base.k_factor = propagation::k_factor(pt.k_per_m, pt.d_m);
    base.total_attenuation_db =
        propagation::total_attenuation_db(pt.f_hz, pt.d_m, pt.k_per_m);

    if (s.variants.empty()) {
      SweepRow row = base;
      row.technique = "none";
      row.reradiation = "none";
      rows.push_back(std::move(row));
    } else {
      const channel::LinkGeometry geom =
          channel::make_facing_arrays(s.antennas, pt.f_hz, pt.d_m);
      const std::uint64_t point_seed = rng::derive_stream(s.seed, idx);
      for (const TechniqueVariant& variant : s.variants) {
        capacity::MonteCarloScenario mc;
        mc.tx = geom.tx;
        mc.rx = geom.rx;
        mc.f_hz = pt.f_hz;
        mc.k_per_m = pt.k_per_m;
        mc.cfg.p_w = s.pt_w;
        mc.cfg.sigma2_w = s.sigma2_w;
        mc.cfg.snr_threshold = s.snr_threshold;
        mc.cfg.technique = variant.technique;
        mc.cfg.include_reradiation = variant.with_reradiation;
        const capacity::CapacityResult result =
            capacity::monte_carlo_capacity(mc, s.trials, point_seed);
        SweepRow row = base;
        row.technique = capacity::to_string(variant.technique);
        row.reradiation = variant.with_reradiation ? "with" : "without";
        row.mean_capacity_bps_hz = result.mean_capacity_bps_hz;
        row.std_bps_hz = result.std_capacity_bps_hz;
        row.active_streams = result.active_streams_mean;
        rows.push_back(std::move(row));
      }
    }
    if (progress && ((idx + 1) % report_every == 0 || idx + 1 == points.size()))
      *progress << s.name << ": " << (idx + 1) << "/" << points.size()
                << " grid points\n";
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     return std::tie(a.f_hz, a.k_per_m, a.d_m, a.technique,
                                     a.reradiation) <
                            std::tie(b.f_hz, b.k_per_m, b.d_m, b.technique,
                                     b.reradiation);
                   });
  return rows;
}

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  std::string buf =
      "f_hz,k_per_m,d_m,pt_w,technique,reradiation,mean_capacity_bps_hz,"
      "std_bps_hz,active_streams,k_factor,total_attenuation_db\n";
  for (const SweepRow& r : rows) {
    buf += format9(r.f_hz);
    buf += ',';
    buf += format9(r.k_per_m);
    buf += ',';
    buf += format9(r.d_m);
    buf += ',';
    buf += format9(r.pt_w);
    buf += ',';
    buf += r.technique;
    buf += ',';
    buf += r.reradiation;
    buf += ',';
    buf += format9(r.mean_capacity_bps_hz);
    buf += ',';
    buf += format9(r.std_bps_hz);
    buf += ',';
    buf += format9(r.active_streams);
    buf += ',';
    buf += format9(r.k_factor);
    buf += ',';
    buf += format9(r.total_attenuation_db);
    buf += '\n';
  }
  out << buf;
}

void emit_csv_file(const std::vector<SweepRow>& rows,
                   const std::filesystem::path& dest) {
  if (rows.empty()) throw DataError("emit_csv: no rows to write");
  std::ofstream out(dest, std::ios::binary);
  if (!out) throw DataError("cannot write CSV to " + dest.string());
  emit_csv(rows, out);
  out.flush();
  if (!out) throw DataError("write failed for " + dest.string());
}

}  // namespace thz::cli
