#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sdlab/brownian.hpp"

using namespace sdlab;

namespace {

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Two-sided Kolmogorov-Smirnov statistic against N(0, 1).
double ks_statistic(std::vector<double> z) {
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = standard_normal_cdf(z[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace

TEST_CASE("fine path generation is deterministic per (seed, path_index)") {
  const auto a = generate_fine_path(42, 0, 8, 1.0);
  const auto b = generate_fine_path(42, 0, 8, 1.0);
  CHECK(a.increments == b.increments);
  CHECK(a.increments.size() == 8);
  CHECK(a.n_fine == 8);

  const auto c = generate_fine_path(42, 1, 8, 1.0);
  CHECK(a.increments != c.increments);
  const auto d = generate_fine_path(43, 0, 8, 1.0);
  CHECK(a.increments != d.increments);
}

TEST_CASE("fine path preconditions") {
  CHECK_THROWS_AS(generate_fine_path(1, 0, 12, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_fine_path(1, 0, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_fine_path(1, 0, 8, 0.0), std::invalid_argument);
  CHECK_NOTHROW(generate_increments(1, 0, 12, 1.0));
}

TEST_CASE("pooled increment variance matches horizon / n_fine") {
  const std::size_t n_fine = 1024;
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (std::uint64_t p = 0; p < 1000; ++p) {
    for (const double dw : generate_fine_path(7, p, n_fine, 1.0).increments) {
      sum += dw;
      sum_sq += dw * dw;
      ++count;
    }
  }
  const double n = static_cast<double>(count);
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1.0);
  CHECK(std::abs(var - 1.0 / 1024.0) <= 0.01 / 1024.0);
  CHECK(std::abs(mean) < 5.0 * std::sqrt(1.0 / 1024.0 / n));
}

TEST_CASE("standardized increments pass a KS test at level 0.001") {
  std::vector<double> z;
  const double sd = std::sqrt(2.0 / 1024.0);
  for (std::uint64_t p = 0; p < 98; ++p)
    for (const double dw : generate_fine_path(99, p, 1024, 2.0).increments) z.push_back(dw / sd);
  REQUIRE(z.size() >= 100000);
  // Asymptotic critical value 1.9495 / sqrt(n) at significance 0.001.
  CHECK(ks_statistic(z) < 1.9495 / std::sqrt(static_cast<double>(z.size())));
}

TEST_CASE("coarsening") {
  BrownianPathGrid path{1.0, 4, {0.1, -0.2, 0.3, 0.4}, 0, 0};
  const auto two = coarsen(path, 2);
  REQUIRE(two.increments.size() == 2);
  CHECK(two.increments[0] == doctest::Approx(-0.1));
  CHECK(two.increments[1] == doctest::Approx(0.7));
  CHECK(two.factor == 2);

  CHECK(coarsen(path, 1).increments == path.increments);

  const auto fine = generate_fine_path(5, 3, 256, 1.0);
  const auto total = coarsen(fine, 256);
  REQUIRE(total.increments.size() == 1);
  const double w_t = std::accumulate(fine.increments.begin(), fine.increments.end(), 0.0);
  CHECK(total.increments[0] == doctest::Approx(w_t).epsilon(1e-12));

  CHECK_THROWS_AS(coarsen(path, 3), std::invalid_argument);
  CHECK_THROWS_AS(coarsen(path, 8), std::invalid_argument);
  CHECK_THROWS_AS(coarsen(path, 0), std::invalid_argument);
}

TEST_CASE("coarsening chains are bit-exact") {
  const auto fine = generate_fine_path(17, 0, 1024, 1.0);
  for (std::size_t f1 = 1; f1 <= 1024; f1 *= 2) {
    const auto first = coarsen(fine, f1);
    for (std::size_t f2 = f1; f2 <= 1024; f2 *= 2) {
      const auto direct = coarsen(fine, f2);
      const auto chained = coarsen(first, f2 / f1);
      CHECK(chained.increments == direct.increments);
      CHECK(chained.factor == f2);
    }
  }
}
