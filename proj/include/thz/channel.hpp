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

#ifndef THZ_CHANNEL_HPP
#define THZ_CHANNEL_HPP

#include <armadillo>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace thz::channel {

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& v);
double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);

// Square uniform planar array: m x m elements (n = m^2) with equal spacing,
// coplanar in the plane orthogonal to `normal`. Element ordering is
// row-major: index = row * m + col, with rows and columns spanning the two
// in-plane basis directions derived deterministically from `normal`.
struct ArrayGeometry {
  std::vector<Vec3> elements;
  double spacing_m = 0;
  Vec3 normal;

  std::size_t size() const { return elements.size(); }
  Vec3 centroid() const;
  // Largest element-to-element extent (the grid diagonal); 0 for n = 1.
  double aperture_m() const;
};

// Builds the array at half-wavelength spacing c / (2 f), centered on
// `center`. n must be a perfect square >= 1.
ArrayGeometry build_square_array(std::size_t n, double f_hz,
                                 const Vec3& center, const Vec3& normal);

// Two broadside-facing arrays on a common boresight axis: tx centered at
// the origin with normal +x, rx centered at (d, 0, 0) with normal -x.
struct LinkGeometry {
  ArrayGeometry tx, rx;
};
LinkGeometry make_facing_arrays(std::size_t n, double f_hz, double d_m);

// Entry (i, j) is the Euclidean distance between rx element i and tx
// element j. Throws std::invalid_argument on coincident elements.
arma::mat pairwise_distances(const ArrayGeometry& tx, const ArrayGeometry& rx);

enum class Provenance { kLos, kReradiation, kTotal };
const char* to_string(Provenance p);

// Complex n_r x n_t matrix of transfer coefficients plus the metadata
// needed to interpret it. `seed` is set for matrices with a re-radiation
// component; `distance_m` is the array-center separation; `aperture_m` is
// the larger of the two array apertures.
struct ChannelMatrix {
  arma::cx_mat entries;
  double f_hz = 0;
  Provenance provenance = Provenance::kLos;
  std::optional<std::uint64_t> seed;
  double k_per_m = 0;
  double distance_m = 0;
  double aperture_m = 0;

  std::size_t n_rx() const { return entries.n_rows; }
  std::size_t n_tx() const { return entries.n_cols; }
};

// Deterministic LoS channel. Entry (i, j) has modulus
// (c / (4 pi f d_ij)) * e^(-k d_ij / 2) and phase 2 pi d_ij f / c.
ChannelMatrix los_channel(const ArrayGeometry& tx, const ArrayGeometry& rx,
                          double f_hz, double k_per_m);

// Molecular re-radiation channel. Entry (i, j) has modulus
// (1 - e^(-k d_ij))^(1/2) * (c / (4 pi f d_ij)) and an i.i.d. phase
// uniform on [0, 2 pi), drawn counter-based from `seed` at entry index
// i * n_t + j. k = 0 yields the zero matrix.
ChannelMatrix reradiation_channel(const ArrayGeometry& tx,
                                  const ArrayGeometry& rx, double f_hz,
                                  double k_per_m, std::uint64_t seed);

// Elementwise sum of los_channel and reradiation_channel.
ChannelMatrix total_channel(const ArrayGeometry& tx, const ArrayGeometry& rx,
                            double f_hz, double k_per_m, std::uint64_t seed);

// Rician split of a total channel: K = e^(-k d) / (1 - e^(-k d)) and the
// matrix normalized by the common free-space amplitude c / (4 pi f d).
// Requires the far-field assumption d >= 10 * aperture (std::domain_error
// otherwise) and provenance `total`.
struct RicianDecomposition {
  double k_factor = 0;
  ChannelMatrix normalized;
};
RicianDecomposition rician_normalize(const ChannelMatrix& total,
                                     double k_per_m, double d_m);

// Matrix dump: `# key=value` metadata lines (f_hz, k_per_m, d_m,
// provenance, seed) followed by a `row,col,re,im` table with shortest
// round-trip decimals.
void dump_csv(const ChannelMatrix& m, std::ostream& out);

}  // namespace thz::channel

#endif
