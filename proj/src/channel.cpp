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

#include "thz/channel.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "thz/constants.hpp"
#include "thz/propagation.hpp"
#include "thz/rng.hpp"

namespace thz::channel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  require(n > 0, "array normal must be non-zero");
  return {v.x / n, v.y / n, v.z / n};
}

// Deterministic right-handed in-plane basis (u, v) for a plane normal.
std::pair<Vec3, Vec3> plane_basis(const Vec3& unit_normal) {
  const Vec3 ref = std::abs(unit_normal.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{0, 1, 0};
  Vec3 u = cross(ref, unit_normal);
  u = normalized(u);
  const Vec3 v = cross(unit_normal, u);
  return {u, v};
}

void append_shortest(std::string& buf, double x) {
  char tmp[32];
  auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof tmp, x);
  buf.append(tmp, ptr);
}

}  // namespace

Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 ArrayGeometry::centroid() const {
  Vec3 c;
  for (const Vec3& p : elements) c = c + p;
  return (1.0 / static_cast<double>(elements.size())) * c;
}

double ArrayGeometry::aperture_m() const {
  // row-major grid: first and last elements sit on opposite corners
  if (elements.size() < 2) return 0.0;
  return norm(elements.back() - elements.front());
}

ArrayGeometry build_square_array(std::size_t n, double f_hz,
                                 const Vec3& center, const Vec3& normal) {
  require(n >= 1, "build_square_array: n must be >= 1");
  require(f_hz > 0, "build_square_array: f must be > 0");
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(
      static_cast<double>(n))));
  require(side * side == n, "build_square_array: n must be a perfect square");

  ArrayGeometry g;
  g.normal = normalized(normal);
  g.spacing_m = kSpeedOfLight / (2.0 * f_hz);  // half wavelength
  g.elements.reserve(n);
  const auto [u, v] = plane_basis(g.normal);
  const double half = (static_cast<double>(side) - 1.0) / 2.0;
  for (std::size_t row = 0; row < side; ++row)
    for (std::size_t col = 0; col < side; ++col) {
      const double du = (static_cast<double>(col) - half) * g.spacing_m;
      const double dv = (static_cast<double>(row) - half) * g.spacing_m;
      g.elements.push_back(center + du * u + dv * v);
    }
  return g;
}

LinkGeometry make_facing_arrays(std::size_t n, double f_hz, double d_m) {
  require(d_m > 0, "make_facing_arrays: d must be > 0");
  return {build_square_array(n, f_hz, {0, 0, 0}, {1, 0, 0}),
          build_square_array(n, f_hz, {d_m, 0, 0}, {-1, 0, 0})};
}

arma::mat pairwise_distances(const ArrayGeometry& tx, const ArrayGeometry& rx) {
  require(tx.size() > 0 && rx.size() > 0, "pairwise_distances: empty array");
  arma::mat d(rx.size(), tx.size());
  for (std::size_t i = 0; i < rx.size(); ++i)
    for (std::size_t j = 0; j < tx.size(); ++j) {
      const double dist = norm(rx.elements[i] - tx.elements[j]);
      if (dist <= 0.0)
        throw std::invalid_argument(
            "pairwise_distances: coincident tx/rx elements");
      d(i, j) = dist;
    }
  return d;
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kLos:
      return "los";
    case Provenance::kReradiation:
      return "reradiation";
    case Provenance::kTotal:
      return "total";
  }
  return "unknown";
}

namespace {

ChannelMatrix make_matrix(const ArrayGeometry& tx, const ArrayGeometry& rx,
                          double f_hz, double k_per_m, Provenance provenance,
                          std::optional<std::uint64_t> seed) {
  ChannelMatrix m;
  m.f_hz = f_hz;
  m.provenance = provenance;
  m.seed = seed;
  m.k_per_m = k_per_m;
  m.distance_m = norm(rx.centroid() - tx.centroid());
  m.aperture_m = std::max(tx.aperture_m(), rx.aperture_m());
  m.entries.set_size(rx.size(), tx.size());
  return m;
}

}  // namespace

ChannelMatrix los_channel(const ArrayGeometry& tx, const ArrayGeometry& rx,
                          double f_hz, double k_per_m) {
  require(f_hz > 0, "los_channel: f must be > 0");
  require(k_per_m >= 0, "los_channel: k must be >= 0");
  const arma::mat dist = pairwise_distances(tx, rx);
  ChannelMatrix m = make_matrix(tx, rx, f_hz, k_per_m, Provenance::kLos, {});
  const double phase_per_m = kTwoPi * f_hz / kSpeedOfLight;  // 2 pi / lambda
  for (std::size_t j = 0; j < tx.size(); ++j)
    for (std::size_t i = 0; i < rx.size(); ++i) {
      const double d = dist(i, j);
      const double amp = kSpeedOfLight / (4.0 * kPi * f_hz * d) *
                         std::exp(-0.5 * k_per_m * d);
      m.entries(i, j) = std::polar(amp, phase_per_m * d);
    }
  return m;
}

ChannelMatrix reradiation_channel(const ArrayGeometry& tx,
                                  const ArrayGeometry& rx, double f_hz,
                                  double k_per_m, std::uint64_t seed) {
  require(f_hz > 0, "reradiation_channel: f must be > 0");
  require(k_per_m >= 0, "reradiation_channel: k must be >= 0");
  const arma::mat dist = pairwise_distances(tx, rx);
  ChannelMatrix m =
      make_matrix(tx, rx, f_hz, k_per_m, Provenance::kReradiation, seed);
  if (k_per_m == 0.0) {
    m.entries.zeros();
    return m;
  }
  const std::size_t n_t = tx.size();
  for (std::size_t j = 0; j < n_t; ++j)
    for (std::size_t i = 0; i < rx.size(); ++i) {
      const double d = dist(i, j);
      const double amp = std::sqrt(-std::expm1(-k_per_m * d)) *
                         kSpeedOfLight / (4.0 * kPi * f_hz * d);
      const double beta = rng::uniform01(seed, i * n_t + j);
      m.entries(i, j) = std::polar(amp, kTwoPi * beta);
    }
  return m;
}

ChannelMatrix total_channel(const ArrayGeometry& tx, const ArrayGeometry& rx,
                            double f_hz, double k_per_m, std::uint64_t seed) {
  ChannelMatrix los = los_channel(tx, rx, f_hz, k_per_m);
  const ChannelMatrix scatter =
      reradiation_channel(tx, rx, f_hz, k_per_m, seed);
  los.entries += scatter.entries;
  los.provenance = Provenance::kTotal;
  los.seed = seed;
  return los;
}

RicianDecomposition rician_normalize(const ChannelMatrix& total,
                                     double k_per_m, double d_m) {
  require(total.provenance == Provenance::kTotal,
          "rician_normalize: matrix must have provenance 'total'");
  require(k_per_m >= 0 && d_m > 0,
          "rician_normalize: k >= 0, d > 0 required");
  if (d_m < 10.0 * total.aperture_m)
    throw std::domain_error(
        "rician_normalize: near-field geometry (d < 10 x aperture)");
  RicianDecomposition out;
  out.k_factor = propagation::k_factor(k_per_m, d_m);
  out.normalized = total;
  out.normalized.entries *= 4.0 * kPi * total.f_hz * d_m / kSpeedOfLight;
  return out;
}

void dump_csv(const ChannelMatrix& m, std::ostream& out) {
  std::string buf;
  buf += "# f_hz=";
  append_shortest(buf, m.f_hz);
  buf += "\n# k_per_m=";
  append_shortest(buf, m.k_per_m);
  buf += "\n# d_m=";
  append_shortest(buf, m.distance_m);
  buf += "\n# provenance=";
  buf += to_string(m.provenance);
  buf += "\n# seed=";
  buf += m.seed ? std::to_string(*m.seed) : std::string("none");
  buf += "\nrow,col,re,im\n";
  for (std::size_t i = 0; i < m.entries.n_rows; ++i)
    for (std::size_t j = 0; j < m.entries.n_cols; ++j) {
      buf += std::to_string(i);
      buf.push_back(',');
      buf += std::to_string(j);
      buf.push_back(',');
      append_shortest(buf, m.entries(i, j).real());
      buf.push_back(',');
      append_shortest(buf, m.entries(i, j).imag());
      buf.push_back('\n');
    }
  out << buf;
}

}  // namespace thz::channel
