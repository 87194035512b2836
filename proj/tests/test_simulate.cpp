#include <cmath>
#include <vector>

#include "common/helpers.hpp"
#include "doctest.h"
#include "subfbm/kernel_matrix.hpp"
#include "subfbm/noise.hpp"
#include "subfbm/simulate.hpp"
#include "subfbm/statistics.hpp"

using subfbm::Distribution;
using subfbm::EnsembleConfig;
using subfbm::KernelMatrix;
using subfbm::KernelSpec;
using subfbm::NoiseStream;
using subfbm::Path;
using subfbm::PathEnsemble;
using subfbm::Scheme;
using testutil::shared_spec;

TEST_CASE("rescaled walk accumulates its own innovations") {
  const int n = 16;
  NoiseStream noise(123, 4, Distribution::Rademacher);
  const Path path = subfbm::donsker_path(n, noise);

  CHECK(path.scheme == Scheme::Donsker);
  CHECK(path.n == n);
  CHECK(path.values.size() == n + 1);
  CHECK(path.values[0] == 0.0);

  NoiseStream replay(123, 4, Distribution::Rademacher);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 1; k <= n; ++k) {
    const double inc = path.values[static_cast<std::size_t>(k)] -
                       path.values[static_cast<std::size_t>(k - 1)];
    CHECK(inc == doctest::Approx(replay.next() * scale).epsilon(1e-15));
  }
}

TEST_CASE("matrix paths are linear in the innovations") {
  const KernelSpec& spec = shared_spec(0.75);
  const KernelMatrix mat = subfbm::build_matrix_floor(12, spec);
  const std::size_t need = mat.innovations_needed();

  SUBCASE("basis vectors read off matrix columns") {
    for (std::size_t i : {std::size_t{0}, std::size_t{5}, need - 1}) {
      std::vector<double> basis(need, 0.0);
      basis[i] = 1.0;
      const Path path = subfbm::kernel_path(mat, basis);
      CHECK(path.values[0] == 0.0);
      for (std::size_t r = 0; r < mat.rows(); ++r) {
        const auto row = mat.row(r);
        const double want = i < row.size() ? row[i] : 0.0;
        CHECK(path.values[r + 1] == want);
      }
    }
  }

  SUBCASE("zero innovations give the zero path") {
    const std::vector<double> zeros(need, 0.0);
    const Path path = subfbm::kernel_path(mat, zeros);
    for (double v : path.values) CHECK(v == 0.0);
  }

  SUBCASE("superposition") {
    std::vector<double> xi(need), eta(need), both(need);
    NoiseStream noise(7, 0, Distribution::StandardGaussian);
    for (std::size_t i = 0; i < need; ++i) {
      xi[i] = noise.next();
      eta[i] = noise.next();
      both[i] = xi[i] + eta[i];
    }
    const Path px = subfbm::kernel_path(mat, xi);
    const Path pe = subfbm::kernel_path(mat, eta);
    const Path pb = subfbm::kernel_path(mat, both);
    for (std::size_t k = 0; k < pb.values.size(); ++k) {
      CHECK(pb.values[k] ==
            doctest::Approx(px.values[k] + pe.values[k]).epsilon(1e-12));
    }
  }

  SUBCASE("stream-driven path equals explicitly drawn innovations") {
    NoiseStream noise(99, 3, Distribution::StandardGaussian);
    const Path from_stream = subfbm::kernel_path(mat, noise);
    NoiseStream replay(99, 3, Distribution::StandardGaussian);
    std::vector<double> xi(need);
    replay.fill(xi);
    const Path from_vector = subfbm::kernel_path(mat, xi);
    CHECK(from_stream.values == from_vector.values);
  }

  SUBCASE("short innovation vectors are rejected") {
    const std::vector<double> short_vec(need - 1, 0.0);
    CHECK_THROWS_AS(subfbm::kernel_path(mat, short_vec),
                    std::invalid_argument);
  }
}

TEST_CASE("stepped path agrees with its weight-matrix form") {
  const KernelSpec& spec = shared_spec(0.75);
  const int m = 4, n = 18;
  NoiseStream noise(55, 2, Distribution::Rademacher);
  const Path direct = subfbm::stepped_path(m, n, spec, noise);

  const KernelMatrix mat = subfbm::build_matrix_stepped(m, n, spec);
  NoiseStream replay(55, 2, Distribution::Rademacher);
  const Path via_matrix = subfbm::kernel_path(mat, replay);

  REQUIRE(direct.values.size() == via_matrix.values.size());
  for (std::size_t k = 0; k < direct.values.size(); ++k) {
    CHECK(direct.values[k] ==
          doctest::Approx(via_matrix.values[k]).epsilon(1e-12));
  }
  CHECK(direct.scheme == Scheme::SubStep);
  CHECK(direct.m == m);
}

TEST_CASE("independent-increment path agrees with its weight-matrix form") {
  const KernelSpec& spec = shared_spec(0.75);
  const int m = 32;
  NoiseStream noise(56, 9, Distribution::StandardGaussian);
  const Path direct = subfbm::wiener_discretization_path(m, spec, noise);

  const KernelMatrix mat = subfbm::build_matrix_wiener(m, spec);
  NoiseStream replay(56, 9, Distribution::StandardGaussian);
  const Path via_matrix = subfbm::kernel_path(mat, replay);

  REQUIRE(direct.values.size() == via_matrix.values.size());
  for (std::size_t k = 0; k < direct.values.size(); ++k) {
    CHECK(direct.values[k] ==
          doctest::Approx(via_matrix.values[k]).epsilon(1e-12));
  }

  SUBCASE("sign innovations are rejected") {
    NoiseStream signs(56, 9, Distribution::Rademacher);
    CHECK_THROWS_AS(subfbm::wiener_discretization_path(m, spec, signs),
                    std::invalid_argument);
  }
}

TEST_CASE("ensembles are deterministic at any worker count") {
  const KernelSpec& spec = shared_spec(0.75);
  const KernelMatrix mat = subfbm::build_matrix_floor(16, spec);

  EnsembleConfig cfg;
  cfg.M = 600;  // spans several scheduling chunks
  cfg.master_seed = 31415;
  cfg.distribution = Distribution::StandardGaussian;

  cfg.workers = 1;
  const PathEnsemble serial = subfbm::run_ensemble(mat, cfg);
  cfg.workers = 5;
  const PathEnsemble five = subfbm::run_ensemble(mat, cfg);
  cfg.workers = 8;
  const PathEnsemble eight = subfbm::run_ensemble(mat, cfg);

  CHECK(serial.values == five.values);
  CHECK(serial.values == eight.values);

  SUBCASE("metadata reflects the build") {
    CHECK(serial.scheme == Scheme::SubFloor);
    CHECK(serial.n == 16);
    CHECK(serial.M == 600);
    CHECK(serial.H == 0.75);
    CHECK(serial.master_seed == 31415);
    CHECK(serial.matrix_checksum == mat.checksum());
    CHECK(serial.values.size() == static_cast<std::size_t>(600) * 17);
    CHECK(serial.path(0).size() == 17);
    CHECK(serial.value(0, 0) == 0.0);
  }

  SUBCASE("each path is its keyed stream's dot product") {
    NoiseStream replay(31415, 123, Distribution::StandardGaussian);
    const subfbm::Path path = subfbm::kernel_path(mat, replay);
    for (int k = 0; k <= 16; ++k) {
      CHECK(serial.value(123, k) == path.values[static_cast<std::size_t>(k)]);
    }
  }
}

TEST_CASE("walk ensembles reproduce single-path construction") {
  EnsembleConfig cfg;
  cfg.M = 40;
  cfg.master_seed = 8;
  cfg.distribution = Distribution::Rademacher;
  cfg.workers = 3;
  const PathEnsemble ens = subfbm::run_donsker_ensemble(25, cfg);
  CHECK(ens.scheme == Scheme::Donsker);
  CHECK(ens.n == 25);
  CHECK(ens.M == 40);
  CHECK(ens.matrix_checksum == 0);

  NoiseStream replay(8, 17, Distribution::Rademacher);
  const Path path = subfbm::donsker_path(25, replay);
  for (int k = 0; k <= 25; ++k) {
    CHECK(ens.value(17, k) == path.values[static_cast<std::size_t>(k)]);
  }
}

TEST_CASE("ensemble variance tracks the weight-row norm") {
  const KernelSpec& spec = shared_spec(0.75);
  const KernelMatrix mat = subfbm::build_matrix_floor(32, spec);

  EnsembleConfig cfg;
  cfg.M = 4000;
  cfg.master_seed = 6021;
  cfg.distribution = Distribution::StandardGaussian;
  cfg.workers = 2;
  const PathEnsemble ens = subfbm::run_ensemble(mat, cfg);

  const double want = mat.row_sum_squares(mat.rows() - 1);
  const subfbm::Estimate got = subfbm::empirical_increment_m2(ens, 0, 32);
  CHECK(std::abs(got.value - want) < 4.0 * got.se);

  // Both innovation laws share the exact second-moment identity.
  cfg.distribution = Distribution::Rademacher;
  cfg.master_seed = 6022;
  const PathEnsemble signs = subfbm::run_ensemble(mat, cfg);
  const subfbm::Estimate got2 = subfbm::empirical_increment_m2(signs, 0, 32);
  CHECK(std::abs(got2.value - want) < 4.0 * got2.se);
}

TEST_CASE("ensemble configuration is validated") {
  const KernelSpec& spec = shared_spec(0.75);
  const KernelMatrix mat = subfbm::build_matrix_floor(4, spec);
  EnsembleConfig cfg;
  cfg.M = 0;
  CHECK_THROWS_AS(subfbm::run_ensemble(mat, cfg), std::invalid_argument);
  CHECK_THROWS_AS(subfbm::run_donsker_ensemble(0, EnsembleConfig{}),
                  std::invalid_argument);
}
