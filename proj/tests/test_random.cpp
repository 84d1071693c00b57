#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "homsim/random.hpp"

using homsim::RandomStream;

TEST_CASE("equal seed and stream index reproduce the sequence") {
  RandomStream a(12345, 7);
  RandomStream b(12345, 7);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("neighbouring stream indices decorrelate immediately") {
  RandomStream a(1, 0);
  RandomStream b(1, 1);
  int equal = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("neighbouring seeds decorrelate immediately") {
  RandomStream a(41, 3);
  RandomStream b(42, 3);
  int equal = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("uniform01 stays in [0, 1) with the right mean") {
  RandomStream rng(99, 0);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("normal draws have standard moments") {
  RandomStream rng(7, 0);
  const int n = 40000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.04);
}

TEST_CASE("poisson rejects invalid means and handles zero") {
  RandomStream rng(1, 0);
  CHECK(rng.poisson(0.0) == 0);
  CHECK_THROWS_AS(rng.poisson(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.poisson(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(rng.poisson(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("poisson sample moments match the rate in both regimes") {
  // Exercises the exact method (below 30) and the Gaussian branch (above).
  for (const double mean : {3.7, 25.0, 80.0, 2000.0}) {
    RandomStream rng(2024, static_cast<std::uint64_t>(mean));
    const int n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(rng.poisson(mean));
      sum += k;
      sum2 += k * k;
    }
    const double sample_mean = sum / n;
    const double sample_var = sum2 / n - sample_mean * sample_mean;
    // 5 sigma bands on the estimators.
    CHECK(std::abs(sample_mean - mean) < 5.0 * std::sqrt(mean / n));
    CHECK(std::abs(sample_var - mean) < 5.0 * mean * std::sqrt(3.0 / n) + 0.3);
  }
}

TEST_CASE("poisson draws are reproducible per stream") {
  RandomStream a(5, 11);
  RandomStream b(5, 11);
  for (int i = 0; i < 32; ++i) CHECK(a.poisson(950.0) == b.poisson(950.0));
}
