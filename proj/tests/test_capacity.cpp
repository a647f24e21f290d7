#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "thz/capacity.hpp"
#include "thz/channel.hpp"
#include "thz/constants.hpp"
#include "thz/rng.hpp"

using namespace thz::capacity;
using thz::channel::ChannelMatrix;
using thz::channel::Provenance;

namespace {

ChannelMatrix wrap(arma::cx_mat m) {
  ChannelMatrix h;
  h.entries = std::move(m);
  h.f_hz = 3e11;
  h.provenance = Provenance::kTotal;
  return h;
}

// Gaussian complex matrix from the counter RNG (Box-Muller)
arma::cx_mat random_matrix(std::uint64_t key, std::size_t rows,
                           std::size_t cols) {
  arma::cx_mat m(rows, cols);
  std::uint64_t ctr = 0;
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) {
      const double u1 = 1.0 - thz::rng::uniform01(key, ctr++);
      const double u2 = thz::rng::uniform01(key, ctr++);
      const double r = std::sqrt(-2.0 * std::log(u1));
      m(i, j) = std::polar(r, 2.0 * std::numbers::pi * u2);
    }
  return m;
}

CapacityConfig cfg_of(double p, double sigma2, Technique t,
                      double threshold = 1.0) {
  CapacityConfig c;
  c.p_w = p;
  c.sigma2_w = sigma2;
  c.snr_threshold = threshold;
  c.technique = t;
  return c;
}

}  // namespace

TEST_CASE("singular values of simple matrices") {
  const auto id = wrap(arma::cx_mat(arma::eye<arma::mat>(2, 2),
                                    arma::zeros<arma::mat>(2, 2)));
  const arma::vec s = singular_values(id);
  REQUIRE(s.n_elem == 2);
  CHECK(s(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s(1) == doctest::Approx(1.0).epsilon(1e-12));

  // rank-1 outer product u v^dag with |u| = |v| = sqrt(n)
  const std::size_t n = 6;
  arma::cx_vec u(n, arma::fill::ones), v(n, arma::fill::ones);
  const auto rank1 = wrap(u * v.t());
  const arma::vec s1 = singular_values(rank1);
  CHECK(s1(0) == doctest::Approx(double(n)).epsilon(1e-12));
  for (std::size_t i = 1; i < n; ++i) CHECK(s1(i) <= 1e-9 * double(n));

  auto bad = wrap(arma::cx_mat(2, 2, arma::fill::zeros));
  bad.entries(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(singular_values(bad), std::invalid_argument);
}

TEST_CASE("singular values match an eigendecomposition of H H^dag") {
  const auto h = wrap(random_matrix(101, 4, 4));
  const arma::vec s = singular_values(h);
  arma::vec ev;
  REQUIRE(arma::eig_sym(ev, arma::cx_mat(h.entries * h.entries.t())));
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(s(i) * s(i) == doctest::Approx(ev(3 - i)).epsilon(1e-9));
}

TEST_CASE("singular spectrum carries the Frobenius energy") {
  for (std::uint64_t key = 0; key < 8; ++key) {
    const std::size_t rows = 2 + key % 5, cols = 2 + (key * 3) % 7;
    const auto h = wrap(random_matrix(200 + key, rows, cols));
    const arma::vec s = singular_values(h);
    REQUIRE(s.n_elem == std::min(rows, cols));
    CHECK(arma::accu(arma::square(s)) ==
          doctest::Approx(std::pow(arma::norm(h.entries, "fro"), 2))
              .epsilon(1e-9));
  }
}

TEST_CASE("multiplexing capacity: identity channel hand arithmetic") {
  const auto id = wrap(arma::cx_mat(arma::eye<arma::mat>(2, 2),
                                    arma::zeros<arma::mat>(2, 2)));
  // P / sigma^2 = 2 with n_t = 2 -> per-stream SNR = 1 (0 dB)
  const auto r = capacity_multiplexing(id, cfg_of(2.0, 1.0,
                                                  Technique::kMultiplexing));
  CHECK(r.capacity_bps_hz == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.active_streams == 2.0);
}

TEST_CASE("multiplexing capacity: all streams below threshold is zero") {
  const auto id = wrap(arma::cx_mat(arma::eye<arma::mat>(4, 4),
                                    arma::zeros<arma::mat>(4, 4)));
  const auto r = capacity_multiplexing(id, cfg_of(1.0, 1.0,
                                                  Technique::kMultiplexing));
  // per-stream SNR = 0.25 < 1
  CHECK(r.capacity_bps_hz == 0.0);
  CHECK(r.active_streams == 0.0);
}

TEST_CASE("beamforming capacity on a single antenna pair") {
  arma::cx_mat h(1, 1);
  h(0, 0) = 0.5;  // |h|^2 = 0.25 = sigma^2 / P for P = 4 sigma^2
  const double c = capacity_beamforming(wrap(h), cfg_of(4.0, 1.0,
                                        Technique::kBeamforming));
  CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
  // below threshold: zero capacity
  const double z = capacity_beamforming(wrap(h), cfg_of(1.0, 1.0,
                                        Technique::kBeamforming));
  CHECK(z == 0.0);
}

TEST_CASE("beamforming array-gain regime matches the SVD route") {
  const auto link = thz::channel::make_facing_arrays(64, 3e11, 2.0);
  const auto h = thz::channel::los_channel(link.tx, link.rx, 3e11, 0.0);
  const double p = 1e-3, sigma2 = 1e-11;
  const double c = capacity_beamforming(h, cfg_of(p, sigma2,
                                        Technique::kBeamforming));
  // rank-1 far field: sigma_1^2 ~ n^2 g, g the per-pair gain
  const double g = std::norm(h.entries(0, 0));
  const double expect = std::log2(1.0 + p * 64.0 * 64.0 * g / sigma2);
  CHECK(c == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("determinant capacity identities") {
  const auto zero = wrap(arma::cx_mat(3, 3, arma::fill::zeros));
  CHECK(capacity_formula_det(zero, cfg_of(1.0, 1.0,
                                          Technique::kMultiplexing)) == 0.0);

  arma::cx_mat one(1, 1);
  one(0, 0) = 1.0;
  CHECK(capacity_formula_det(wrap(one), cfg_of(3.0, 1.0,
                                               Technique::kMultiplexing)) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("determinant form equals the singular-value sum") {
  for (std::uint64_t key = 0; key < 10; ++key) {
    const std::size_t rows = 2 + (key * 5) % 31, cols = 2 + (key * 7) % 31;
    const auto h = wrap(random_matrix(300 + key, rows, cols));
    const double p = 2.5, sigma2 = 0.7;
    const double det_form =
        capacity_formula_det(h, cfg_of(p, sigma2, Technique::kMultiplexing));
    const arma::vec s = singular_values(h);
    double sum_form = 0;
    for (double sv : s)
      sum_form += std::log2(1.0 + p * sv * sv / (double(cols) * sigma2));
    CHECK(det_form == doctest::Approx(sum_form).epsilon(1e-9));
  }
}

TEST_CASE("multiplexing at threshold zero equals the determinant form") {
  const auto h = wrap(random_matrix(42, 8, 8));
  const auto cfg = cfg_of(2.0, 1.0, Technique::kMultiplexing, 0.0);
  const auto r = capacity_multiplexing(h, cfg);
  CHECK(r.capacity_bps_hz ==
        doctest::Approx(capacity_formula_det(h, cfg)).epsilon(1e-9));
  CHECK(r.active_streams == 8.0);
}

TEST_CASE("multiplexing capacity is non-increasing in the threshold") {
  const auto h = wrap(random_matrix(43, 8, 8));
  double prev = std::numeric_limits<double>::infinity();
  for (double thr : {0.0, 0.5, 1.0, 2.0, 8.0, 1e3}) {
    const auto r = capacity_multiplexing(
        h, cfg_of(2.0, 1.0, Technique::kMultiplexing, thr));
    CHECK(r.capacity_bps_hz <= prev + 1e-12);
    prev = r.capacity_bps_hz;
  }
}

TEST_CASE("pure LoS far field: beamforming beats uniform multiplexing") {
  const auto link = thz::channel::make_facing_arrays(16, 3e11, 1.0);
  const auto h = thz::channel::los_channel(link.tx, link.rx, 3e11, 0.0);
  const double bf = capacity_beamforming(h, cfg_of(1e-3, 1e-11,
                                         Technique::kBeamforming));
  const auto mux = capacity_multiplexing(h, cfg_of(1e-3, 1e-11,
                                         Technique::kMultiplexing));
  CHECK(bf >= mux.capacity_bps_hz);
}

TEST_CASE("scale covariance: scaling P and sigma^2 together is a no-op") {
  const auto h = wrap(random_matrix(44, 6, 6));
  for (double alpha : {1e-6, 3.0, 1e9}) {
    const auto a = capacity_multiplexing(h, cfg_of(2.0, 1.0,
                                         Technique::kMultiplexing));
    const auto b = capacity_multiplexing(h, cfg_of(2.0 * alpha, alpha,
                                         Technique::kMultiplexing));
    CHECK(a.capacity_bps_hz == doctest::Approx(b.capacity_bps_hz).epsilon(1e-12));
    CHECK(capacity_beamforming(h, cfg_of(2.0, 1.0, Technique::kBeamforming)) ==
          doctest::Approx(capacity_beamforming(
              h, cfg_of(2.0 * alpha, alpha, Technique::kBeamforming)))
              .epsilon(1e-12));
  }
}

TEST_CASE("Monte Carlo capacity") {
  MonteCarloScenario sc;
  const auto link = thz::channel::make_facing_arrays(16, 5e11, 0.5);
  sc.tx = link.tx;
  sc.rx = link.rx;
  sc.f_hz = 5e11;
  sc.cfg = cfg_of(1e-3, 1e-11, Technique::kMultiplexing);

  SUBCASE("k = 0: deterministic channel, zero spread") {
    sc.k_per_m = 0.0;
    const auto r = monte_carlo_capacity(sc, 20, 7);
    CHECK(r.std_capacity_bps_hz == 0.0);
    CHECK(r.trials == 20);
    sc.cfg.technique = Technique::kBeamforming;
    const auto b = monte_carlo_capacity(sc, 20, 7);
    CHECK(b.std_capacity_bps_hz == 0.0);
  }

  SUBCASE("same seed reproduces the result bit-identically") {
    sc.k_per_m = 0.8;
    const auto a = monte_carlo_capacity(sc, 50, 123);
    const auto b = monte_carlo_capacity(sc, 50, 123);
    CHECK(a.mean_capacity_bps_hz == b.mean_capacity_bps_hz);
    CHECK(a.std_capacity_bps_hz == b.std_capacity_bps_hz);
    CHECK(a.active_streams_mean == b.active_streams_mean);
    const auto c = monte_carlo_capacity(sc, 50, 124);
    CHECK(a.mean_capacity_bps_hz != c.mean_capacity_bps_hz);
  }

  SUBCASE("ignoring re-radiation collapses to one trial") {
    sc.k_per_m = 0.8;
    sc.cfg.include_reradiation = false;
    const auto r = monte_carlo_capacity(sc, 500, 9);
    CHECK(r.trials == 1);
    CHECK(r.std_capacity_bps_hz == 0.0);
    const auto los = thz::channel::los_channel(sc.tx, sc.rx, sc.f_hz,
                                               sc.k_per_m);
    const auto direct = capacity_multiplexing(los, sc.cfg);
    CHECK(r.mean_capacity_bps_hz == direct.capacity_bps_hz);
  }

  SUBCASE("metadata fields are filled in") {
    sc.k_per_m = 0.3;
    const auto r = monte_carlo_capacity(sc, 5, 1);
    CHECK(r.f_hz == 5e11);
    CHECK(r.d_m == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.k_per_m == 0.3);
    CHECK(r.technique == Technique::kMultiplexing);
  }

  SUBCASE("parallel trial execution is bit-identical to sequential") {
    sc.k_per_m = 1.2;
    setenv("THZMIMO_THREADS", "1", 1);
    const auto sequential = monte_carlo_capacity(sc, 64, 77);
    setenv("THZMIMO_THREADS", "4", 1);
    const auto threaded = monte_carlo_capacity(sc, 64, 77);
    unsetenv("THZMIMO_THREADS");
    CHECK(sequential.mean_capacity_bps_hz == threaded.mean_capacity_bps_hz);
    CHECK(sequential.std_capacity_bps_hz == threaded.std_capacity_bps_hz);
    CHECK(sequential.active_streams_mean == threaded.active_streams_mean);
  }
}

TEST_CASE("Rician lower bound holds and grows with k") {
  MonteCarloScenario sc;
  const auto link = thz::channel::make_facing_arrays(16, 3e11, 1.0);
  sc.tx = link.tx;
  sc.rx = link.rx;
  sc.f_hz = 3e11;
  sc.k_per_m = 0.5;
  sc.cfg = cfg_of(16e-11, 1e-11, Technique::kMultiplexing);  // alpha = 1

  const auto bound = rician_lower_bound(sc, 400, 31);
  const double margin =
      3.0 * std::sqrt(bound.se_full * bound.se_full +
                      bound.se_nlos_only * bound.se_nlos_only);
  CHECK(bound.mean_full >= bound.mean_nlos_only - margin);

  // NLoS-only side is non-decreasing in k
  sc.k_per_m = 1.0;
  const auto higher = rician_lower_bound(sc, 400, 31);
  CHECK(higher.mean_nlos_only >=
        bound.mean_nlos_only -
            3.0 * std::sqrt(bound.se_nlos_only * bound.se_nlos_only +
                            higher.se_nlos_only * higher.se_nlos_only));

  CHECK_THROWS_AS([&] {
    sc.k_per_m = 0.0;
    rician_lower_bound(sc, 10, 1);
  }(), std::invalid_argument);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(validate(cfg_of(0.0, 1.0, Technique::kBeamforming)),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(cfg_of(1.0, 0.0, Technique::kBeamforming)),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(cfg_of(1.0, 1.0, Technique::kBeamforming, -1.0)),
                  std::invalid_argument);
}
