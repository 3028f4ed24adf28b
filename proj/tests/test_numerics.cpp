#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fpcc/numerics.hpp"

using namespace fpcc;

namespace {

Vec random_point(Rng& rng, int n) {
  Vec v(std::size_t(n), 0.0);
  for (double& c : v) c = rng.next_unit();
  return v;
}

}  // namespace

TEST_CASE("normalized norm definition values") {
  const Vec a{1.0, 0.0};
  CHECK(normalized_norm(a, NormKind::l2()) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  const Vec b{0.5, 0.5, 0.5};
  CHECK(normalized_norm(b, NormKind::max()) == 0.5);
  for (int n : {1, 3, 7}) {
    const Vec ones(std::size_t(n), 1.0);
    for (double p : {1.0, 2.0, 3.5})
      CHECK(normalized_norm(ones, NormKind::lp(p)) == doctest::Approx(1.0));
    CHECK(normalized_norm(ones, NormKind::max()) == 1.0);
  }
  CHECK_THROWS_AS(normalized_norm(Vec{}, NormKind::l2()),
                  std::invalid_argument);
  CHECK_THROWS_AS(NormKind::lp(0.5), std::invalid_argument);
}

TEST_CASE("norm monotonicity in p") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + int(rng.next_u64() % 8);
    const Vec x = random_point(rng, n);
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 4.0, 16.0}) {
      const double v = normalized_norm(x, NormKind::lp(p));
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
    CHECK(normalized_norm(x, NormKind::max()) >= prev - 1e-12);
  }
}

TEST_CASE("block super-additivity (sum of block norms >= whole)") {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 1 + int(rng.next_u64() % 4);
    const int n = 1 + int(rng.next_u64() % 5);
    const Vec x = random_point(rng, n * r), y = random_point(rng, n * r);
    for (double p : {1.0, 2.0, 3.0}) {
      const NormKind k = p > 2.5 ? NormKind::max() : NormKind::lp(p);
      double blocks = 0.0;
      for (int i = 0; i < r; ++i) {
        const std::span<const double> xi(x.data() + i * n, std::size_t(n));
        const std::span<const double> yi(y.data() + i * n, std::size_t(n));
        blocks += normalized_dist(xi, yi, k);
      }
      CHECK(blocks >= normalized_dist(x, y, k) - 1e-12);
    }
  }
}

TEST_CASE("block extraction bound r^(1/p)") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 1 + int(rng.next_u64() % 4);
    const int n = 1 + int(rng.next_u64() % 5);
    const Vec x = random_point(rng, n * r), y = random_point(rng, n * r);
    for (double p : {1.0, 2.0}) {
      const NormKind k = NormKind::lp(p);
      const double whole = normalized_dist(x, y, k);
      for (int i = 0; i < r; ++i) {
        const std::span<const double> xi(x.data() + i * n, std::size_t(n));
        const std::span<const double> yi(y.data() + i * n, std::size_t(n));
        CHECK(normalized_dist(xi, yi, k) <=
              std::pow(double(r), 1.0 / p) * whole + 1e-12);
      }
    }
    const double whole = normalized_dist(x, y, NormKind::max());
    for (int i = 0; i < r; ++i) {
      const std::span<const double> xi(x.data() + i * n, std::size_t(n));
      const std::span<const double> yi(y.data() + i * n, std::size_t(n));
      CHECK(normalized_dist(xi, yi, NormKind::max()) <= whole + 1e-12);
    }
  }
}

TEST_CASE("grid enumeration counts and order") {
  const auto g1 = grid_points(GridSpec::make(1, 1.0));
  REQUIRE(g1.size() == 2);
  CHECK(g1[0] == Vec{0.0});
  CHECK(g1[1] == Vec{1.0});

  // Lemma-upper covering set size (1 + 2/delta)^n with delta = 1
  const auto g2 = grid_points(GridSpec::make(1, 0.5));
  REQUIRE(g2.size() == 3);
  CHECK(g2[1] == Vec{0.5});
  CHECK(g2[2] == Vec{1.0});

  const auto g3 = grid_points(GridSpec::make(2, 0.5));
  CHECK(g3.size() == 9);
  CHECK(g3.front() == Vec{0.0, 0.0});
  CHECK(g3[1] == Vec{0.0, 0.5});  // lexicographic
  CHECK(g3.back() == Vec{1.0, 1.0});

  CHECK(GridSpec::make(3, 0.1).point_count() == 11 * 11 * 11);
  CHECK_THROWS_AS(GridSpec::make(0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::make(1, 0.0), std::invalid_argument);
}

TEST_CASE("nearest grid point with round-down ties") {
  const GridSpec g = GridSpec::make(1, 0.5);
  CHECK(nearest_grid(Vec{0.26}, g) == Vec{0.5});
  CHECK(nearest_grid(Vec{0.25}, g) == Vec{0.0});  // declared tie-break
  CHECK(nearest_grid(Vec{0.5}, g) == Vec{0.5});   // on-grid fixed point
  CHECK(nearest_grid(Vec{1.0}, g) == Vec{1.0});

  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 1 + int(rng.next_u64() % 16);
    const int dim = 1 + int(rng.next_u64() % 4);
    const GridSpec spec = GridSpec::make(dim, 1.0 / k);
    const Vec x = random_point(rng, dim);
    const Vec y = nearest_grid(x, spec);
    Vec diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
    CHECK(normalized_norm(diff, NormKind::max()) <= spec.alpha / 2 + 1e-12);
  }
}
