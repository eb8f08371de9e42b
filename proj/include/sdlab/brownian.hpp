#pragma once

#include <cstdint>
#include <vector>

namespace sdlab {

/// Wiener increments at the finest resolution of one experiment.
struct BrownianPathGrid {
  double horizon = 1.0;
  std::size_t n_fine = 0;
  std::vector<double> increments;  // each ~ N(0, horizon / n_fine)
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;

  double fine_step() const { return horizon / static_cast<double>(n_fine); }
};

/// Block sums of a fine path. Entry k sums fine increments
/// [k*factor, (k+1)*factor), combined as a pairwise tree over ascending
/// indices.
struct CoarseIncrements {
  std::size_t factor = 1;
  double horizon = 1.0;
  std::vector<double> increments;

  double step() const { return horizon / static_cast<double>(increments.size()); }
};

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// n i.i.d. N(0, horizon/n) variates from the stream of (seed, path_index).
/// No power-of-two restriction; used where coupling is not needed.
std::vector<double> generate_increments(std::uint64_t seed, std::uint64_t path_index,
                                        std::size_t n, double horizon);

/// Throws std::invalid_argument unless n_fine is a power of two and horizon > 0.
BrownianPathGrid generate_fine_path(std::uint64_t seed, std::uint64_t path_index,
                                    std::size_t n_fine, double horizon);

/// Throws std::invalid_argument when factor is not a power of two dividing
/// n_fine.
CoarseIncrements coarsen(const BrownianPathGrid& path, std::size_t factor);
/// Further coarsening of an already coarsened path; factors multiply.
CoarseIncrements coarsen(const CoarseIncrements& coarse, std::size_t factor);

}  // namespace sdlab
