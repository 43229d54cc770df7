#pragma once

#include <cstdint>

#include "qlc/quat.hpp"

namespace qlc {

/* Counter-based generator: the value of draw #i depends only on (seed, i),
 * so parallel workers covering disjoint index ranges reproduce the serial
 * stream exactly. Mixing is the SplitMix64 finalizer. */
struct CounterRng {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  explicit CounterRng(std::uint64_t seed_, std::uint64_t start = 0)
      : seed(seed_), counter(start) {}

  /* substream for sample #index; stride leaves room for per-sample draws */
  static CounterRng for_sample(std::uint64_t seed, std::uint64_t index,
                               std::uint64_t stride = 1024) {
    return CounterRng(seed, index * stride);
  }

  std::uint64_t next_u64();
  /* uniform in [0, 1) */
  double next_double();
  /* uniform in (0, 1] (never zero; safe for logs) */
  double next_open();
  /* standard normal via Box-Muller */
  double next_gaussian();

  Quaternion gaussian_quaternion();
  HVector gaussian_hvector(std::size_t n);
  /* uniform on the unit sphere of the 4n real components */
  HVector unit_hvector(std::size_t n);
  /* uniform in the closed ball of given radius */
  HVector ball_hvector(std::size_t n, double radius);
};

}  // namespace qlc
