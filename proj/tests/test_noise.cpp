#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "subfbm/noise.hpp"
#include "subfbm/statistics.hpp"

using subfbm::Distribution;
using subfbm::NoiseStream;

TEST_CASE("distribution names round-trip") {
  for (auto d : {Distribution::Rademacher, Distribution::StandardGaussian}) {
    CHECK(subfbm::distribution_from_name(subfbm::distribution_name(d)) == d);
  }
  CHECK_THROWS_AS(subfbm::distribution_from_name("pareto"),
                  std::invalid_argument);
}

TEST_CASE("streams are pure functions of their key") {
  for (auto dist : {Distribution::Rademacher, Distribution::StandardGaussian}) {
    NoiseStream a(42, 7, dist);
    NoiseStream b(42, 7, dist);
    for (int i = 0; i < 64; ++i) CHECK(a.next() == b.next());
  }
}

TEST_CASE("fill matches repeated draws") {
  NoiseStream a(9, 3, Distribution::StandardGaussian);
  NoiseStream b(9, 3, Distribution::StandardGaussian);
  std::vector<double> filled(101);
  a.fill(filled);
  for (double v : filled) CHECK(v == b.next());
}

TEST_CASE("distinct keys give distinct draws") {
  NoiseStream a(42, 7, Distribution::StandardGaussian);
  NoiseStream b(42, 8, Distribution::StandardGaussian);
  NoiseStream c(43, 7, Distribution::StandardGaussian);
  bool differ_stream = false;
  bool differ_seed = false;
  NoiseStream a2(42, 7, Distribution::StandardGaussian);
  for (int i = 0; i < 16; ++i) {
    const double va = a.next();
    if (va != b.next()) differ_stream = true;
    if (a2.next() != c.next()) differ_seed = true;
  }
  CHECK(differ_stream);
  CHECK(differ_seed);
}

TEST_CASE("interleaved streams do not contaminate each other") {
  NoiseStream a(5, 1, Distribution::StandardGaussian);
  NoiseStream b(5, 2, Distribution::StandardGaussian);
  std::vector<double> a_inter, b_inter;
  for (int i = 0; i < 32; ++i) {
    a_inter.push_back(a.next());
    b_inter.push_back(b.next());
  }
  NoiseStream a_solo(5, 1, Distribution::StandardGaussian);
  NoiseStream b_solo(5, 2, Distribution::StandardGaussian);
  for (int i = 0; i < 32; ++i) {
    CHECK(a_inter[static_cast<std::size_t>(i)] == a_solo.next());
    CHECK(b_inter[static_cast<std::size_t>(i)] == b_solo.next());
  }
}

TEST_CASE("sign innovations take only the two unit values with balance") {
  NoiseStream s(2024, 0, Distribution::Rademacher);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = s.next();
    CHECK((v == 1.0 || v == -1.0));
    sum += v;
  }
  // mean has SE = 1/sqrt(n); allow 4 SE
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("gaussian innovations have standard moments and law") {
  NoiseStream s(2024, 1, Distribution::StandardGaussian);
  const int n = 100000;
  std::vector<double> draws(static_cast<std::size_t>(n));
  s.fill(draws);

  double sum = 0.0, sumsq = 0.0;
  for (double v : draws) {
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));

  // Distribution-level agreement on a subsample.
  const std::span<const double> head(draws.data(), 10000);
  const subfbm::KsResult ks = subfbm::ks_test_standard_normal(head);
  CHECK(ks.p_value > 1e-3);
}

TEST_CASE("uniform draws stay inside the open unit interval") {
  NoiseStream s(77, 5, Distribution::StandardGaussian);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = s.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("stream accessors report the key") {
  NoiseStream s(11, 22, Distribution::Rademacher);
  CHECK(s.master_seed() == 11);
  CHECK(s.stream_id() == 22);
  CHECK(s.distribution() == Distribution::Rademacher);
}
