#include "sdlab/brownian.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "sdlab/random.hpp"

namespace sdlab {

std::vector<double> generate_increments(std::uint64_t seed, std::uint64_t path_index,
                                        std::size_t n, double horizon) {
  if (n == 0) throw std::invalid_argument("brownian: need at least one increment");
  if (!(horizon > 0.0)) throw std::invalid_argument("brownian: horizon must be > 0");

  auto rng = derive_stream(seed, path_index);
  std::normal_distribution<double> normal(0.0, std::sqrt(horizon / static_cast<double>(n)));
  std::vector<double> out(n);
  for (auto& dw : out) dw = normal(rng);
  return out;
}

BrownianPathGrid generate_fine_path(std::uint64_t seed, std::uint64_t path_index,
                                    std::size_t n_fine, double horizon) {
  if (!is_power_of_two(n_fine))
    throw std::invalid_argument("brownian: n_fine must be a power of two");
  return BrownianPathGrid{horizon, n_fine,
                          generate_increments(seed, path_index, n_fine, horizon), seed,
                          path_index};
}

namespace {

// Pairwise halving: a coarsening by f2 then equals a coarsening by f1
// followed by f2/f1, bit for bit, for any chain of power-of-two factors.
std::vector<double> block_sums(std::vector<double> sums, std::size_t factor) {
  if (!is_power_of_two(factor) || sums.size() % factor != 0)
    throw std::invalid_argument("brownian: coarsening factor must divide n_fine");
  for (std::size_t width = 1; width < factor; width *= 2) {
    const std::size_t half = sums.size() / 2;
    for (std::size_t k = 0; k < half; ++k) sums[k] = sums[2 * k] + sums[2 * k + 1];
    sums.resize(half);
  }
  return sums;
}

}  // namespace

CoarseIncrements coarsen(const BrownianPathGrid& path, std::size_t factor) {
  return {factor, path.horizon, block_sums(path.increments, factor)};
}

CoarseIncrements coarsen(const CoarseIncrements& coarse, std::size_t factor) {
  return {coarse.factor * factor, coarse.horizon, block_sums(coarse.increments, factor)};
}

}  // namespace sdlab
